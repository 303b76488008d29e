#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qpeci/errors.hpp"
#include "qpeci/qpe.hpp"

namespace qpeci {

using cd = std::complex<double>;

namespace {

std::vector<cd> backward_dft(const std::vector<cd>& in) {
  const int n = static_cast<int>(in.size());
  std::vector<cd> out(in.size());
  std::vector<cd> scratch = in;
  fftw_plan plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(scratch.data()),
                                    reinterpret_cast<fftw_complex*>(out.data()), FFTW_BACKWARD,
                                    FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  return out;
}

double dtft_magnitude(const std::vector<cd>& s, double omega, double dt) {
  cd acc = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j)
    acc += s[j] * std::polar(1.0, omega * dt * static_cast<double>(j));
  return std::abs(acc);
}

double golden_max(const std::vector<cd>& s, double dt, double lo, double hi) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = dtft_magnitude(s, x1, dt), f2 = dtft_magnitude(s, x2, dt);
  for (int it = 0; it < 80 && b - a > 1e-13 * std::max(1.0, std::abs(a)); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = dtft_magnitude(s, x2, dt);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = dtft_magnitude(s, x1, dt);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

AutocorrelationResult autocorrelation_spectrum(const ExactEvolver& evolver,
                                               const Eigen::VectorXd& ref, EnergyWindow window,
                                               double t_max, std::size_t n_samples,
                                               AutocorrelationOptions options) {
  if (n_samples < 4 || (n_samples & (n_samples - 1)) != 0)
    throw DomainError("sample count must be a power of two, at least 4");
  if (!(t_max > 0.0)) throw DomainError("t_max must be positive");
  const auto& spec = evolver.spectrum();
  if (ref.size() != static_cast<Eigen::Index>(spec.size()))
    throw DomainError("reference has the wrong dimension");
  if (std::abs(ref.norm() - 1.0) > 1e-10) throw DomainError("reference state is not normalized");

  const std::size_t N = n_samples;
  const double dt = t_max / static_cast<double>(N);
  const double two_pi = 2.0 * std::numbers::pi;
  const double span = two_pi / dt;  // frequency range covered by the grid
  if (span < window.width() * (1.0 - 1e-12))
    throw WindowError("sampling interval too coarse for the energy window: need t_max/n <= " +
                      std::to_string(two_pi / window.width()));

  const Eigen::VectorXd amp = spec.vectors().transpose() * ref;
  const Eigen::VectorXd weight = amp.array().square();
  for (std::size_t n = 0; n < spec.size(); ++n)
    if (weight(static_cast<Eigen::Index>(n)) > 1e-14 && !window.contains(spec[n].energy))
      throw WindowError("populated eigenvalue outside the energy window");

  AutocorrelationResult out;
  out.rayleigh_limit = two_pi / t_max;

  std::vector<double> times(N);
  for (std::size_t j = 0; j < N; ++j) times[j] = dt * static_cast<double>(j);
  out.signal = evolver.autocorrelation(ref.cast<cd>(), times);

  std::vector<cd> s(N);
  double wsum = 0.0, w2sum = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    const double w =
        options.hann ? 0.5 - 0.5 * std::cos(two_pi * static_cast<double>(j) / static_cast<double>(N))
                     : 1.0;
    wsum += w;
    w2sum += w * w;
    s[j] = w * std::polar(1.0, window.e_min * times[j]) * out.signal[j];
  }
  const std::vector<cd> x = backward_dft(s);
  std::vector<double> mag(N);
  for (std::size_t k = 0; k < N; ++k) mag[k] = std::abs(x[k]);
  const double peak_max = *std::max_element(mag.begin(), mag.end());

  const auto at = [&](long long k) {
    const auto n = static_cast<long long>(N);
    return mag[static_cast<std::size_t>(((k % n) + n) % n)];
  };
  const double bin = out.rayleigh_limit;
  for (std::size_t k = 0; k < N; ++k) {
    const auto kk = static_cast<long long>(k);
    const double c = mag[k];
    if (c < options.relative_threshold * peak_max || c == 0.0) continue;
    if (!(c >= at(kk - 1) && c > at(kk + 1))) continue;

    double offset = 0.0;
    const double l = at(kk - 1), r = at(kk + 1);
    if (l > 0.0 && r > 0.0) {
      const double ll = std::log(l), lc = std::log(c), lr = std::log(r);
      const double den = ll - 2.0 * lc + lr;
      if (den < 0.0) offset = std::clamp(0.5 * (ll - lr) / den, -0.5, 0.5);
    }
    double omega = bin * (static_cast<double>(k) + offset);
    omega = golden_max(s, dt, omega - 0.5 * bin, omega + 0.5 * bin);
    // frequencies past the window wrap around to negative offsets
    if (omega >= 0.5 * (window.width() + span)) omega -= span;

    double power = c * c;
    long long lo = kk, hi = kk;
    for (long long step = 0; step < static_cast<long long>(N / 2) && at(lo - 1) < at(lo); ++step) {
      --lo;
      power += at(lo) * at(lo);
    }
    for (long long step = 0; step < static_cast<long long>(N / 2) && at(hi + 1) < at(hi); ++step) {
      ++hi;
      power += at(hi) * at(hi);
    }

    SpectralPeak p;
    p.energy = window.e_min + omega;
    p.magnitude = c / wsum;
    p.weight = std::sqrt(power / (static_cast<double>(N) * w2sum));
    out.peaks.push_back(p);
  }
  std::sort(out.peaks.begin(), out.peaks.end(),
            [](const SpectralPeak& a, const SpectralPeak& b) { return a.energy < b.energy; });

  std::vector<double> populated;
  const double wmax = weight.maxCoeff();
  for (std::size_t n = 0; n < spec.size(); ++n)
    if (weight(static_cast<Eigen::Index>(n)) >= options.relative_threshold * wmax)
      populated.push_back(spec[n].energy);
  std::sort(populated.begin(), populated.end());
  for (std::size_t i = 1; i < populated.size(); ++i) {
    const double gap = populated[i] - populated[i - 1];
    if (gap > 1e-9 && gap < out.rayleigh_limit) {
      out.resolution_warning = "populated states " + std::to_string(populated[i - 1]) + " and " +
                               std::to_string(populated[i]) +
                               " are closer than the Rayleigh limit " +
                               std::to_string(out.rayleigh_limit);
      break;
    }
  }
  return out;
}

}  // namespace qpeci
