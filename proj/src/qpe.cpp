#include "qpeci/qpe.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "qpeci/cispace.hpp"
#include "qpeci/errors.hpp"

namespace qpeci {

using cd = std::complex<double>;

namespace {

constexpr double kOnGrid = 1e-9;

double wrap_unit(double x) {
  x -= std::floor(x);
  return x >= 1.0 ? 0.0 : x;
}

double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

Eigen::VectorXd component_weights(const PhaseModel& model, const Eigen::VectorXd& ref) {
  if (static_cast<std::size_t>(ref.size()) != model.dim())
    throw DomainError("reference has the wrong dimension for the phase model");
  const double norm = ref.norm();
  if (std::abs(norm - 1.0) > 1e-10) throw DomainError("reference state is not normalized");
  return (model.vectors.transpose() * ref).array().square();
}

}  // namespace

PhaseModel exact_phase_model(const Spectrum& spectrum, EnergyWindow window) {
  if (spectrum.pairs.empty() ||
      static_cast<Eigen::Index>(spectrum.size()) != spectrum.pairs.front().vector.size())
    throw DomainError("exact phase model needs the complete spectrum");
  PhaseModel model;
  model.window = window;
  model.backend = Backend::exact();
  model.vectors = spectrum.vectors();
  model.fractions.resize(static_cast<Eigen::Index>(spectrum.size()));
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    const double e = spectrum[k].energy;
    if (!window.contains(e))
      throw WindowError("eigenvalue " + std::to_string(e) + " outside the energy window [" +
                        std::to_string(window.e_min) + ", " + std::to_string(window.e_max) + ")");
    model.fractions(static_cast<Eigen::Index>(k)) = wrap_unit(window.fraction(e));
  }
  model.target_qubits = qubit_count(spectrum.size());
  return model;
}

PhaseModel trotter_phase_model(const SparseSymmetricMatrix& h, EnergyWindow window,
                               std::size_t n_steps) {
  const TrotterEvolver evolver(h);
  const auto n = static_cast<Eigen::Index>(h.dim());
  // U = exp(2 pi i (H - e_min) / W): evolve for tau = -2 pi / W, then a global phase
  const double tau = -2.0 * std::numbers::pi / window.width();
  Eigen::MatrixXcd u(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    u.col(i) = evolver.evolve(tau, ComplexVector::Unit(n, i), n_steps);
  // The palindromic product is complex symmetric and unitary, so its real
  // and imaginary parts are commuting real symmetric matrices with a shared
  // orthonormal eigenbasis. A generic combination separates the phases.
  const Eigen::MatrixXd re = 0.5 * (u.real() + u.real().transpose());
  const Eigen::MatrixXd im = 0.5 * (u.imag() + u.imag().transpose());
  const double mix = 0.6180339887498949;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(re + mix * im);
  PhaseModel model;
  model.window = window;
  model.backend = Backend::trotter(n_steps);
  model.vectors = es.eigenvectors();
  model.fractions.resize(n);
  const double shift = window.e_min / window.width();
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto v = model.vectors.col(k);
    const double c = v.dot(re * v), s = v.dot(im * v);
    model.fractions(k) = wrap_unit(std::atan2(s, c) / (2.0 * std::numbers::pi) - shift);
  }
  model.target_qubits = qubit_count(h.dim());
  return model;
}

PhaseModel make_phase_model(const SparseSymmetricMatrix& h, EnergyWindow window, Backend backend) {
  if (backend.kind == Backend::Kind::trotter) {
    if (h.dim() > dense_dimension_cap())
      throw CapacityError("Trotter phase model above the dense dimension cap");
    return trotter_phase_model(h, window, backend.n_steps);
  }
  return exact_phase_model(dense_eigh(h.to_dense()), window);
}

double PEAOutcome::energy_of(std::uint64_t bin) const {
  return window.e_min + window.width() * static_cast<double>(bin) / static_cast<double>(n_bins());
}

std::string PEAOutcome::bitstring(std::uint64_t bin) const {
  std::string s(m, '0');
  for (std::size_t b = 0; b < m; ++b)
    if ((bin >> b) & 1) s[m - 1 - b] = '1';
  return s;
}

std::pair<std::uint64_t, double> PEAOutcome::top() const {
  std::pair<std::uint64_t, double> best{0, -1.0};
  for (const auto& [bin, p] : probabilities)
    if (p > best.second) best = {bin, p};
  return best;
}

double PEAOutcome::probability(std::uint64_t bin) const {
  const auto it = std::lower_bound(probabilities.begin(), probabilities.end(),
                                   std::pair<std::uint64_t, double>{bin, -1.0});
  return it != probabilities.end() && it->first == bin ? it->second : 0.0;
}

double pea_kernel(double omega, std::uint64_t bin, std::size_t m) {
  const std::uint64_t M = std::uint64_t{1} << m;
  const double nearest = std::round(omega);
  const double frac = omega - nearest;
  if (std::abs(frac) < kOnGrid) {
    const auto j = static_cast<std::uint64_t>(static_cast<long long>(nearest)) & (M - 1);
    return j == (bin & (M - 1)) ? 1.0 : 0.0;
  }
  const double Md = static_cast<double>(M);
  const double num = std::sin(std::numbers::pi * frac);
  const double den = Md * std::sin(std::numbers::pi * (omega - static_cast<double>(bin)) / Md);
  return (num * num) / (den * den);
}

PEAOutcome qpe_distribution(const PhaseModel& model, const Eigen::VectorXd& ref, std::size_t m,
                            QpeOptions options) {
  if (m < 1 || m > 62) throw DomainError("index register size must be in 1..62");
  const Eigen::VectorXd w = component_weights(model, ref);
  const std::uint64_t M = std::uint64_t{1} << m;
  const double Md = static_cast<double>(M);
  PEAOutcome out;
  out.m = m;
  out.window = model.window;

  if (m <= options.max_full_bits) {
    std::vector<double> p(M, 0.0);
    for (Eigen::Index k = 0; k < w.size(); ++k) {
      if (w(k) == 0.0) continue;
      const double omega = Md * model.fractions(k);
      const double nearest = std::round(omega);
      const double frac = omega - nearest;
      if (std::abs(frac) < kOnGrid) {
        p[static_cast<std::uint64_t>(static_cast<long long>(nearest)) & (M - 1)] += w(k);
        continue;
      }
      const double num = std::sin(std::numbers::pi * frac);
      const double scale = w(k) * num * num / (Md * Md);
      for (std::uint64_t j = 0; j < M; ++j) {
        const double s = std::sin(std::numbers::pi * (omega - static_cast<double>(j)) / Md);
        p[j] += scale / (s * s);
      }
    }
    out.probabilities.reserve(M);
    for (std::uint64_t j = 0; j < M; ++j) out.probabilities.emplace_back(j, p[j]);
    return out;
  }

  // components below this weight only add to the truncated mass
  constexpr double kNegligible = 1e-14;
  std::map<std::uint64_t, double> p;
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    if (w(k) < kNegligible) continue;
    const double omega = Md * model.fractions(k);
    const auto centre = static_cast<long long>(std::round(omega));
    const auto reach = static_cast<long long>(std::min<std::uint64_t>(options.neighbourhood, M / 2 - 1));
    for (long long d = -reach; d <= reach; ++d) {
      const auto j = static_cast<std::uint64_t>(centre + d) & (M - 1);
      const double f = pea_kernel(omega, j, m);
      if (f > 0.0) p[j] += w(k) * f;
    }
  }
  double total = 0.0;
  for (const auto& [bin, prob] : p) {
    out.probabilities.emplace_back(bin, prob);
    total += prob;
  }
  out.truncated_mass = std::max(0.0, 1.0 - total);
  return out;
}

PEAOutcome qpe_distribution(const SparseSymmetricMatrix& h, const Eigen::VectorXd& ref,
                            std::size_t m, EnergyWindow window, Backend backend,
                            QpeOptions options) {
  return qpe_distribution(make_phase_model(h, window, backend), ref, m, options);
}

std::vector<std::pair<std::uint64_t, std::size_t>> IPEARun::counts() const {
  std::map<std::uint64_t, std::size_t> c;
  for (const auto& s : samples) ++c[s.bin];
  return {c.begin(), c.end()};
}

IPEARun ipea_sample(const PhaseModel& model, const Eigen::VectorXd& ref, std::size_t m,
                    std::size_t shots, std::uint64_t seed, bool retain_states) {
  if (shots == 0) throw DomainError("IPEA needs at least one shot");
  if (m < 1 || m > 62) throw DomainError("index register size must be in 1..62");
  component_weights(model, ref);
  const Eigen::VectorXd c0 = model.vectors.transpose() * ref;
  const Eigen::Index K = c0.size();

  IPEARun run;
  run.seed = seed;
  run.shots = shots;
  run.m = m;
  run.window = model.window;
  run.samples.reserve(shots);
  const double two_pi = 2.0 * std::numbers::pi;
  PEAOutcome grid;
  grid.m = m;
  grid.window = model.window;

  Eigen::VectorXcd a(K);
  for (std::size_t shot = 0; shot < shots; ++shot) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(shot), static_cast<std::uint32_t>(shot >> 32)};
    std::mt19937_64 gen(seq);
    a = c0.cast<cd>();
    std::uint64_t bin = 0;
    for (std::size_t b = 0; b < m; ++b) {
      const std::size_t power = m - 1 - b;  // controlled-U^(2^power)
      const double feedback = std::ldexp(static_cast<double>(bin), -static_cast<int>(b + 1));
      double p0 = 0.0;
      Eigen::VectorXcd rot(K);
      for (Eigen::Index k = 0; k < K; ++k) {
        const double phase = std::fmod(std::ldexp(model.fractions(k), static_cast<int>(power)), 1.0);
        rot(k) = std::polar(1.0, two_pi * (phase - feedback));
        p0 += std::norm(a(k)) * 0.25 * std::norm(1.0 + rot(k));
      }
      p0 = std::clamp(p0, 0.0, 1.0);
      const int bit = uniform01(gen) < p0 ? 0 : 1;
      const double p = bit == 0 ? p0 : 1.0 - p0;
      const double sgn = bit == 0 ? 1.0 : -1.0;
      const double inv = 1.0 / std::sqrt(p);
      for (Eigen::Index k = 0; k < K; ++k) a(k) *= 0.5 * (1.0 + sgn * rot(k)) * inv;
      bin |= static_cast<std::uint64_t>(bit) << b;
    }
    run.samples.push_back({bin, grid.bitstring(bin), grid.energy_of(bin)});
    if (retain_states) run.collapsed_states.push_back(model.vectors.cast<cd>() * a);
  }
  return run;
}

std::vector<DigitsRow> digits_table(const PhaseModel& model, const Eigen::VectorXd& ref,
                                    std::span<const std::size_t> ms, QpeOptions options) {
  std::vector<DigitsRow> rows;
  for (auto m : ms) {
    const auto dist = qpe_distribution(model, ref, m, options);
    const auto [bin, p] = dist.top();
    rows.push_back({m, dist.energy_of(bin), dist.half_bin(), dist.full_bin(), p});
  }
  return rows;
}

}  // namespace qpeci
