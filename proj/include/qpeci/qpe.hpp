#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qpeci/evolution.hpp"
#include "qpeci/hamiltonian.hpp"
#include "qpeci/solver.hpp"

namespace qpeci {

/// Affine map between energies and phases: an energy E is read out as the
/// phase 2*pi*(E - e_min)/(e_max - e_min). Valid windows have e_max > e_min.
struct EnergyWindow {
  double e_min = 0.0;
  double e_max = 1.0;

  static EnergyWindow make(double e_min, double e_max);
  double width() const { return e_max - e_min; }
  bool contains(double e) const { return e >= e_min && e < e_max; }
  /// (E - e_min) / width, in [0, 1) for energies inside the window.
  double fraction(double e) const { return (e - e_min) / width(); }
};

struct WindowOptions {
  double margin = 0.05;     // fraction of the covered range added on each side
  double min_width = 1.0;   // floor applied before the margin
};

/// Window covering [lo, hi] with the configured margin.
EnergyWindow auto_window(double lo, double hi, WindowOptions options = {});
EnergyWindow auto_window(const Spectrum& spectrum, WindowOptions options = {});
/// Gershgorin bounds, for when no spectrum has been computed.
EnergyWindow auto_window(const SparseSymmetricMatrix& h, WindowOptions options = {});

/// How controlled powers of U are realized.
struct Backend {
  enum class Kind { exact, trotter };
  Kind kind = Kind::exact;
  std::size_t n_steps = 1;  // Trotter steps per application of U

  static Backend exact() { return {}; }
  static Backend trotter(std::size_t n) { return {Kind::trotter, n}; }
  /// "exact" or "trotter:<n>".
  static Backend parse(const std::string& text);
  std::string name() const;
};

/// Eigen-decomposition of the phase-estimation unitary
///   U = exp(2*pi*i*(H - e_min)/width),
/// either exact (eigenphases are the window fractions of the energies) or
/// of its second-order product-formula realization. Eigenvectors are real
/// and orthonormal in both cases.
struct PhaseModel {
  Eigen::MatrixXd vectors;    // columns
  Eigen::VectorXd fractions;  // eigenphase / (2 pi), in [0, 1)
  EnergyWindow window;
  Backend backend;
  /// Qubits of the target register; the CI space is padded to 2^n with U
  /// acting as identity on the padding.
  std::size_t target_qubits = 0;

  std::size_t dim() const { return static_cast<std::size_t>(vectors.rows()); }
};

/// WindowError if any eigenvalue lies outside the window.
PhaseModel exact_phase_model(const Spectrum& complete_spectrum, EnergyWindow window);
PhaseModel trotter_phase_model(const SparseSymmetricMatrix& h, EnergyWindow window,
                               std::size_t n_steps);
/// Backend dispatch; the exact path diagonalizes `h` densely.
PhaseModel make_phase_model(const SparseSymmetricMatrix& h, EnergyWindow window, Backend backend);

/// Index-register measurement distribution after the inverse QFT.
struct PEAOutcome {
  std::size_t m = 0;
  /// (bin, probability) ascending by bin. Complete for m up to the full-bin
  /// limit; above it only bins near each populated eigenphase are listed
  /// and `truncated_mass` holds the probability left out.
  std::vector<std::pair<std::uint64_t, double>> probabilities;
  EnergyWindow window;
  double truncated_mass = 0.0;

  std::uint64_t n_bins() const { return std::uint64_t{1} << m; }
  double energy_of(std::uint64_t bin) const;
  double half_bin() const { return window.width() / static_cast<double>(n_bins()) / 2.0; }
  double full_bin() const { return 2.0 * half_bin(); }
  /// m-character bitstring, most significant bit first.
  std::string bitstring(std::uint64_t bin) const;
  /// Most probable bin (lowest bin on ties).
  std::pair<std::uint64_t, double> top() const;
  double probability(std::uint64_t bin) const;
};

struct QpeOptions {
  std::size_t max_full_bits = 16;
  std::uint64_t neighbourhood = 64;  // bins kept on each side above the limit
};

/// Phase-estimation kernel |(1/M) sum_l exp(2 pi i l (omega - j)/M)|^2.
double pea_kernel(double omega, std::uint64_t bin, std::size_t m);

/// Exact distribution P(j) = sum_k |c_k|^2 F_m(j; omega_k); no sampling.
/// `ref` is the reference in the CI basis (zero weight on padding).
PEAOutcome qpe_distribution(const PhaseModel& model, const Eigen::VectorXd& ref, std::size_t m,
                            QpeOptions options = {});
PEAOutcome qpe_distribution(const SparseSymmetricMatrix& h, const Eigen::VectorXd& ref,
                            std::size_t m, EnergyWindow window, Backend backend,
                            QpeOptions options = {});

struct IpeaSample {
  std::uint64_t bin = 0;
  std::string bits;  // most significant first
  double energy = 0.0;
};

struct IPEARun {
  std::uint64_t seed = 0;
  std::size_t shots = 0;
  std::size_t m = 0;
  EnergyWindow window;
  std::vector<IpeaSample> samples;
  /// Target register after each shot, in the CI basis (when requested).
  std::vector<ComplexVector> collapsed_states;

  /// (bin, count) ascending by bin.
  std::vector<std::pair<std::uint64_t, std::size_t>> counts() const;
};

/// Iterative phase estimation with a single control qubit. Per shot, the
/// bit multiplying 2^b is resolved with controlled-U^(2^(m-1-b)) for
/// b = 0 .. m-1 (least significant first), the already measured lower bits
/// entering as a feedback phase rotation; the control outcome
/// probabilities are exact and the target register is collapsed after
/// each measurement. Shot s draws from its own stream seeded by (seed, s).
IPEARun ipea_sample(const PhaseModel& model, const Eigen::VectorXd& ref, std::size_t m,
                    std::size_t shots, std::uint64_t seed, bool retain_states = false);

struct SpectralPeak {
  double energy = 0.0;
  double weight = 0.0;     // estimated |A_n|^2
  double magnitude = 0.0;  // normalized spectral magnitude at the peak
};

struct AutocorrelationOptions {
  bool hann = true;
  double relative_threshold = 0.01;
};

struct AutocorrelationResult {
  std::vector<SpectralPeak> peaks;
  double rayleigh_limit = 0.0;  // 2 pi / t_max
  /// Set when populated states lie closer than the Rayleigh limit.
  std::optional<std::string> resolution_warning;
  std::vector<std::complex<double>> signal;  // P(t_j), unwindowed
};

/// P(t) = <ref|exp(-iHt)|ref> on a uniform grid over [0, t_max), Fourier
/// transformed; local maxima above the threshold are refined below bin
/// resolution. n_samples must be a power of two and the sampling must
/// cover the window without aliasing (WindowError otherwise).
AutocorrelationResult autocorrelation_spectrum(const ExactEvolver& evolver,
                                               const Eigen::VectorXd& ref, EnergyWindow window,
                                               double t_max, std::size_t n_samples,
                                               AutocorrelationOptions options = {});

struct DigitsRow {
  std::size_t m = 0;
  double energy = 0.0;
  double half_bin = 0.0;
  double full_bin = 0.0;
  double probability = 0.0;
};

/// Top peak of the distribution for each index-register size.
std::vector<DigitsRow> digits_table(const PhaseModel& model, const Eigen::VectorXd& ref,
                                    std::span<const std::size_t> ms, QpeOptions options = {});

}  // namespace qpeci
