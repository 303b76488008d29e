#include <algorithm>
#include <cmath>
#include <limits>

#include "qpeci/errors.hpp"
#include "qpeci/qpe.hpp"

namespace qpeci {

EnergyWindow EnergyWindow::make(double e_min, double e_max) {
  if (!std::isfinite(e_min) || !std::isfinite(e_max) || !(e_max > e_min))
    throw DomainError("energy window needs finite e_max > e_min");
  return {e_min, e_max};
}

EnergyWindow auto_window(double lo, double hi, WindowOptions options) {
  if (hi < lo) std::swap(lo, hi);
  double width = hi - lo;
  if (width < options.min_width) {
    const double mid = 0.5 * (lo + hi);
    lo = mid - 0.5 * options.min_width;
    hi = mid + 0.5 * options.min_width;
    width = options.min_width;
  }
  return EnergyWindow::make(lo - options.margin * width, hi + options.margin * width);
}

EnergyWindow auto_window(const Spectrum& spectrum, WindowOptions options) {
  if (spectrum.pairs.empty()) throw DomainError("window of an empty spectrum");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& p : spectrum.pairs) {
    lo = std::min(lo, p.energy);
    hi = std::max(hi, p.energy);
  }
  return auto_window(lo, hi, options);
}

EnergyWindow auto_window(const SparseSymmetricMatrix& h, WindowOptions options) {
  if (h.dim() == 0) throw DomainError("window of an empty operator");
  const auto radius = h.off_diagonal_row_sums();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < h.dim(); ++i) {
    lo = std::min(lo, h.diagonal()[i] - radius[i]);
    hi = std::max(hi, h.diagonal()[i] + radius[i]);
  }
  return auto_window(lo, hi, options);
}

Backend Backend::parse(const std::string& text) {
  if (text == "exact") return exact();
  const std::string prefix = "trotter:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string n = text.substr(prefix.size());
    char* end = nullptr;
    const long v = std::strtol(n.c_str(), &end, 10);
    if (!n.empty() && *end == '\0' && v >= 1) return trotter(static_cast<std::size_t>(v));
  }
  throw DomainError("backend must be 'exact' or 'trotter:<steps>', got '" + text + "'");
}

std::string Backend::name() const {
  return kind == Kind::exact ? "exact" : "trotter:" + std::to_string(n_steps);
}

}  // namespace qpeci
