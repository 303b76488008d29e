#include "qpeci/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "qpeci/errors.hpp"

namespace qpeci {

namespace {

constexpr double kDuplicateTolerance = 1e-10;

std::size_t pair_index(std::size_t a, std::size_t b) {
  if (a < b) std::swap(a, b);
  return a * (a + 1) / 2 + b;
}

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

// Fortran writes exponents as 1.0D-03.
double parse_real(std::string token, std::size_t line) {
  std::replace(token.begin(), token.end(), 'D', 'E');
  std::replace(token.begin(), token.end(), 'd', 'e');
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (token.empty() || *end != '\0') throw ParseError("expected a real number, got '" + token + "'", line);
  return v;
}

long parse_integer(const std::string& token, std::size_t line) {
  char* end = nullptr;
  const long v = std::strtol(token.c_str(), &end, 10);
  if (token.empty() || *end != '\0') throw ParseError("expected an integer, got '" + token + "'", line);
  return v;
}

struct Token {
  std::string text;
  std::size_t line;
};

struct Header {
  std::map<std::string, std::vector<Token>> values;
  std::size_t line = 0;
};

// Reads the namelist block from `&FCI` (or `$FCI`) up to `&END`, `$END` or `/`. Returns the
// header and leaves `line_no` at the last header line.
Header read_header(std::istream& in, std::size_t& line_no) {
  Header header;
  std::string line;
  bool started = false;
  bool finished = false;
  std::string key;
  while (!finished && std::getline(in, line)) {
    ++line_no;
    std::string text = line;
    if (!started) {
      const auto first = text.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      const std::string head = upper(text.substr(first, 4));
      if (head != "&FCI" && head != "$FCI")
        throw ParseError("expected '&FCI' namelist header", line_no);
      started = true;
      header.line = line_no;
      text = text.substr(first + 4);
    }
    for (auto& c : text)
      if (c == ',' || c == '\t' || c == '\r') c = ' ';
    std::istringstream ss(text);
    std::string tok;
    while (ss >> tok) {
      const std::string up = upper(tok);
      if (up == "&END" || up == "/" || up == "$END") {
        finished = true;
        break;
      }
      if (up.back() == '/' && up.size() > 1) {
        tok.pop_back();
        finished = true;
      }
      const auto eq = tok.find('=');
      if (eq != std::string::npos) {
        key = upper(tok.substr(0, eq));
        if (key.empty()) throw ParseError("namelist entry without a key", line_no);
        header.values[key];
        tok = tok.substr(eq + 1);
        if (tok.empty()) {
          if (finished) break;
          continue;
        }
      }
      if (key.empty()) throw ParseError("value '" + tok + "' before any key", line_no);
      // repeat counts such as 4*1
      const auto star = tok.find('*');
      if (star != std::string::npos) {
        const long count = parse_integer(tok.substr(0, star), line_no);
        if (count < 1) throw ParseError("bad repeat count in '" + tok + "'", line_no);
        for (long i = 0; i < count; ++i) header.values[key].push_back({tok.substr(star + 1), line_no});
      } else {
        header.values[key].push_back({tok, line_no});
      }
      if (finished) break;
    }
  }
  if (!started) throw ParseError("missing '&FCI' namelist header", line_no);
  if (!finished) throw ParseError("unterminated namelist header (no '&END' or '/')", line_no);
  return header;
}

long required_scalar(const Header& h, const std::string& key) {
  const auto it = h.values.find(key);
  if (it == h.values.end() || it->second.empty())
    throw ParseError("namelist header lacks " + key, h.line);
  if (it->second.size() != 1) throw ParseError(key + " takes a single value", it->second.front().line);
  return parse_integer(it->second.front().text, it->second.front().line);
}

}  // namespace

IntegralTable::IntegralTable(std::size_t n_orbitals, std::size_t n_electrons, int ms2,
                             std::vector<Irrep> orbital_irreps, Irrep target_irrep)
    : n_orbitals_(n_orbitals),
      n_electrons_(n_electrons),
      ms2_(ms2),
      irreps_(std::move(orbital_irreps)),
      target_irrep_(target_irrep) {
  if (n_orbitals_ == 0) throw DomainError("integral table needs at least one orbital");
  if (n_orbitals_ > 64) throw DomainError("at most 64 orbitals are supported");
  if (irreps_.empty()) irreps_.assign(n_orbitals_, 0);
  if (irreps_.size() != n_orbitals_) throw DomainError("one irrep label per orbital required");
  const long nalpha2 = static_cast<long>(n_electrons_) + ms2_;
  if (nalpha2 < 0 || nalpha2 % 2 != 0 || std::abs(ms2_) > static_cast<long>(n_electrons_))
    throw ConsistencyError("NELEC and MS2 are inconsistent");
  if (n_alpha() > n_orbitals_ || n_beta() > n_orbitals_)
    throw ConsistencyError("more electrons of one spin than orbitals");
  const auto n = static_cast<Eigen::Index>(n_orbitals_);
  h_one_ = Eigen::MatrixXd::Zero(n, n);
  h_set_.assign(n_orbitals_ * n_orbitals_, 0);
  const std::size_t npair = n_orbitals_ * (n_orbitals_ + 1) / 2;
  g_two_.assign(npair * (npair + 1) / 2, 0.0);
  g_set_.assign(g_two_.size(), 0);
  pairs_.reserve(npair);
  for (std::size_t p = 0; p < n_orbitals_; ++p)
    for (std::size_t q = 0; q <= p; ++q) pairs_.emplace_back(p, q);
}

std::size_t IntegralTable::point_group_order() const {
  Irrep max_label = 0;
  for (auto v : irreps_) max_label = std::max(max_label, v);
  std::size_t order = 1;
  while (order <= max_label) order <<= 1;
  return order;
}

void IntegralTable::check_index(std::size_t p) const {
  if (p >= n_orbitals_)
    throw IndexError("orbital index " + std::to_string(p + 1) + " outside 1.." + std::to_string(n_orbitals_));
}

std::size_t IntegralTable::canonical_index(std::size_t p, std::size_t q, std::size_t r,
                                           std::size_t s) const {
  return pair_index(pair_index(p, q), pair_index(r, s));
}

bool IntegralTable::one_is_set(std::size_t p, std::size_t q) const {
  return h_set_[std::min(p, q) * n_orbitals_ + std::max(p, q)] != 0;
}

void IntegralTable::set_one(std::size_t p, std::size_t q, double value) {
  check_index(p);
  check_index(q);
  auto& flag = h_set_[std::min(p, q) * n_orbitals_ + std::max(p, q)];
  const auto ip = static_cast<Eigen::Index>(p), iq = static_cast<Eigen::Index>(q);
  if (flag && std::abs(h_one_(ip, iq) - value) > kDuplicateTolerance)
    throw ConsistencyError("conflicting duplicate one-electron integral (" + std::to_string(p + 1) +
                           "," + std::to_string(q + 1) + ")");
  flag = 1;
  h_one_(ip, iq) = value;
  h_one_(iq, ip) = value;
}

void IntegralTable::set_two(std::size_t p, std::size_t q, std::size_t r, std::size_t s,
                            double value) {
  check_index(p);
  check_index(q);
  check_index(r);
  check_index(s);
  const auto idx = canonical_index(p, q, r, s);
  if (g_set_[idx] && std::abs(g_two_[idx] - value) > kDuplicateTolerance)
    throw ConsistencyError("conflicting duplicate two-electron integral (" + std::to_string(p + 1) +
                           " " + std::to_string(q + 1) + "|" + std::to_string(r + 1) + " " +
                           std::to_string(s + 1) + ")");
  g_set_[idx] = 1;
  g_two_[idx] = value;
}

void IntegralTable::set_core_energy(double value) {
  if (core_set_ && std::abs(core_energy_ - value) > kDuplicateTolerance)
    throw ConsistencyError("conflicting duplicate core energy record");
  core_set_ = true;
  core_energy_ = value;
}

IntegralTable parse_fcidump(std::istream& in) {
  std::size_t line_no = 0;
  const Header header = read_header(in, line_no);

  const long norb = required_scalar(header, "NORB");
  const long nelec = required_scalar(header, "NELEC");
  const long ms2 = required_scalar(header, "MS2");
  if (norb < 1) throw ParseError("NORB must be positive", header.line);
  if (nelec < 0) throw ParseError("NELEC must be non-negative", header.line);

  std::vector<Irrep> irreps(static_cast<std::size_t>(norb), 0);
  if (auto it = header.values.find("ORBSYM"); it != header.values.end()) {
    if (static_cast<long>(it->second.size()) != norb)
      throw ParseError("ORBSYM lists " + std::to_string(it->second.size()) + " labels for NORB=" +
                           std::to_string(norb),
                       it->second.empty() ? header.line : it->second.front().line);
    for (std::size_t i = 0; i < irreps.size(); ++i) {
      const long v = parse_integer(it->second[i].text, it->second[i].line);
      if (v < 1) throw ParseError("ORBSYM labels are 1-based", it->second[i].line);
      irreps[i] = static_cast<Irrep>(v - 1);
    }
  }
  Irrep target = 0;
  if (auto it = header.values.find("ISYM"); it != header.values.end() && !it->second.empty()) {
    const long v = parse_integer(it->second.front().text, it->second.front().line);
    if (v < 1) throw ParseError("ISYM is 1-based", it->second.front().line);
    target = static_cast<Irrep>(v - 1);
  }

  IntegralTable table(static_cast<std::size_t>(norb), static_cast<std::size_t>(nelec),
                      static_cast<int>(ms2), std::move(irreps), target);

  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::string value_tok;
    if (!(ss >> value_tok)) continue;
    long idx[4];
    for (auto& v : idx) {
      std::string t;
      if (!(ss >> t)) throw ParseError("integral record needs a value and four indices", line_no);
      v = parse_integer(t, line_no);
      if (v < 0 || v > norb)
        throw IndexError("line " + std::to_string(line_no) + ": index " + std::to_string(v) +
                         " outside 0.." + std::to_string(norb));
    }
    std::string extra;
    if (ss >> extra) throw ParseError("trailing token '" + extra + "' in integral record", line_no);
    const double value = parse_real(value_tok, line_no);
    const auto [i, j, k, l] = idx;
    if (i && j && k && l) {
      table.set_two(i - 1, j - 1, k - 1, l - 1, value);
    } else if (i && j && !k && !l) {
      table.set_one(i - 1, j - 1, value);
    } else if (!i && !j && !k && !l) {
      table.set_core_energy(value);
    } else if (i && !j && !k && !l) {
      // orbital energy record; not part of the Hamiltonian
    } else {
      throw ParseError("unrecognised index pattern in integral record", line_no);
    }
  }
  return table;
}

IntegralTable parse_fcidump(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_fcidump(in);
}

IntegralTable read_fcidump(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open FCIDUMP file '" + path + "'");
  return parse_fcidump(in);
}

std::string write_fcidump(const IntegralTable& t) {
  std::ostringstream out;
  out << " &FCI NORB=" << t.n_orbitals() << ",NELEC=" << t.n_electrons() << ",MS2=" << t.ms2()
      << ",\n  ORBSYM=";
  for (std::size_t i = 0; i < t.n_orbitals(); ++i) out << (i ? "," : "") << t.orbital_irreps()[i] + 1;
  out << ",\n  ISYM=" << t.target_irrep() + 1 << ",\n &END\n";
  char buf[96];
  t.for_each_two([&](std::size_t p, std::size_t q, std::size_t r, std::size_t s, double v) {
    std::snprintf(buf, sizeof buf, "%.17g %zu %zu %zu %zu\n", v, p + 1, q + 1, r + 1, s + 1);
    out << buf;
  });
  for (std::size_t p = 0; p < t.n_orbitals(); ++p)
    for (std::size_t q = 0; q <= p; ++q)
      if (t.one_is_set(p, q)) {
        std::snprintf(buf, sizeof buf, "%.17g %zu %zu 0 0\n", t.one(p, q), p + 1, q + 1);
        out << buf;
      }
  std::snprintf(buf, sizeof buf, "%.17g 0 0 0 0\n", t.core_energy());
  out << buf;
  return out.str();
}

DenseOperator parse_dense_operator(std::istream& in) {
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  if (tokens.empty()) throw ParseError("empty dense operator");
  const long dim = parse_integer(tokens.front(), 1);
  if (dim < 1) throw ParseError("dense operator dimension must be positive", 1);
  const auto n = static_cast<std::size_t>(dim);
  if (tokens.size() != 1 + n * n)
    throw ParseError("expected " + std::to_string(n * n) + " matrix entries, found " +
                     std::to_string(tokens.size() - 1));
  DenseOperator op{Eigen::MatrixXd(dim, dim)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double v = parse_real(tokens[1 + i * n + j], 0);
      if (!std::isfinite(v)) throw ConsistencyError("non-finite dense operator entry");
      op.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < i; ++j)
      if (std::abs(op.entries(i, j) - op.entries(j, i)) > 1e-12)
        throw ConsistencyError("dense operator is not symmetric at (" + std::to_string(i + 1) + "," +
                               std::to_string(j + 1) + ")");
  return op;
}

DenseOperator parse_dense_operator(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dense_operator(in);
}

DenseOperator read_dense_operator(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open dense operator file '" + path + "'");
  return parse_dense_operator(in);
}

}  // namespace qpeci
