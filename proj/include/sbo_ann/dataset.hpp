#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sbo_ann/error.hpp"
#include "sbo_ann/random.hpp"

namespace sbo_ann {

inline constexpr std::size_t kFeatureCount = 8;
inline constexpr std::size_t kVariableCount = kFeatureCount + 1;

// Canonical column names, features first, target last.
inline constexpr std::array<std::string_view, kVariableCount> kColumnNames = {
    "CSC", "TSC", "CA", "DMAX", "SPC", "FM", "WB", "SR", "UCS"};

// Labels and units as they appear in the published statistics table.
inline constexpr std::array<std::string_view, kVariableCount> kDisplayNames = {
    "CSC", "TSC", "CA", "Dmax", "SPC", "FM", "W/B", "SR", "UCS"};
inline constexpr std::array<std::string_view, kVariableCount> kUnits = {
    "MPa", "MPa", "Day", "mm", "%", "-", "-", "%", "MPa"};

using FeatureVector = std::array<double, kFeatureCount>;

/// One concrete sample: eight mix/curing inputs plus measured UCS in MPa.
struct ConcreteRecord {
  double csc = 0.0;  // compressive strength of cement, MPa
  double tsc = 0.0;  // tensile strength of cement, MPa
  double ca = 0.0;   // curing age, days
  double dmax = 0.0; // max crushed-stone size, mm
  double spc = 0.0;  // stone powder content, %
  double fm = 0.0;   // fineness modulus
  double wb = 0.0;   // water/binder ratio
  double sr = 0.0;   // sand ratio, %
  double ucs = 0.0;  // target, MPa

  FeatureVector features() const { return {csc, tsc, ca, dmax, spc, fm, wb, sr}; }

  // Variable by canonical index (0..7 features, 8 = UCS).
  double value(std::size_t index) const {
    switch (index) {
    case 0: return csc;
    case 1: return tsc;
    case 2: return ca;
    case 3: return dmax;
    case 4: return spc;
    case 5: return fm;
    case 6: return wb;
    case 7: return sr;
    case 8: return ucs;
    default: throw DimensionError("variable index out of range: " + std::to_string(index));
    }
  }

  static ConcreteRecord from_values(const std::array<double, kVariableCount> &v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]};
  }

  friend bool operator==(const ConcreteRecord &, const ConcreteRecord &) = default;
};

/// Throws ValidationError unless the record satisfies the domain invariants.
inline void validate(const ConcreteRecord &r) {
  for (std::size_t i = 0; i < kVariableCount; ++i)
    if (!std::isfinite(r.value(i)))
      throw ValidationError(std::string(kColumnNames[i]) + " is not finite");
  if (r.ucs <= 0.0)
    throw ValidationError("UCS must be positive, got " + std::to_string(r.ucs));
  if (r.ca < 1.0)
    throw ValidationError("CA must be at least 1 day, got " + std::to_string(r.ca));
}

using Dataset = std::vector<ConcreteRecord>;

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos)
      break;
    start = pos + 1;
  }
  return out;
}

inline std::optional<double> parse_double(std::string_view s) {
  if (!s.empty() && s.front() == '+')
    s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    return std::nullopt;
  return v;
}

inline std::optional<std::size_t> column_index(std::string_view name) {
  for (std::size_t i = 0; i < kColumnNames.size(); ++i)
    if (kColumnNames[i] == name)
      return i;
  return std::nullopt;
}

inline void write_number(std::ostream &os, double v) {
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
}

} // namespace detail

/// Numeric table keyed by canonical column names. `require_target` selects
/// whether UCS must be present (training data) or is optional (prediction
/// inputs). Rows are 1-based in error messages, counting data rows only.
struct CsvTable {
  std::vector<std::array<double, kVariableCount>> rows;
  bool has_target = false;
};

inline CsvTable read_table(std::istream &in, bool require_target) {
  std::string line;
  if (!std::getline(in, line))
    throw SchemaError("missing header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
    line.erase(0, 3);

  auto header = detail::split_fields(line);
  std::array<std::optional<std::size_t>, kVariableCount> position{};
  for (std::size_t pos = 0; pos < header.size(); ++pos) {
    auto idx = detail::column_index(header[pos]);
    if (!idx)
      throw SchemaError("unknown column '" + std::string(header[pos]) + "'");
    if (position[*idx])
      throw SchemaError("duplicate column '" + std::string(header[pos]) + "'");
    position[*idx] = pos;
  }
  for (std::size_t i = 0; i < kFeatureCount; ++i)
    if (!position[i])
      throw SchemaError("missing column '" + std::string(kColumnNames[i]) + "'");
  if (require_target && !position[kFeatureCount])
    throw SchemaError("missing column 'UCS'");

  CsvTable table;
  table.has_target = position[kFeatureCount].has_value();
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty())
      continue;
    ++row;
    auto fields = detail::split_fields(line);
    if (fields.size() != header.size())
      throw ParseError(row, "*", "expected " + std::to_string(header.size()) + " fields, got " +
                                     std::to_string(fields.size()));
    std::array<double, kVariableCount> values{};
    for (std::size_t i = 0; i < kVariableCount; ++i) {
      if (!position[i])
        continue;
      auto cell = fields[*position[i]];
      auto v = detail::parse_double(cell);
      if (!v)
        throw ParseError(row, std::string(kColumnNames[i]), "not a number: '" + std::string(cell) + "'");
      if (!std::isfinite(*v))
        throw ParseError(row, std::string(kColumnNames[i]), "non-finite value");
      values[i] = *v;
    }
    table.rows.push_back(values);
  }
  return table;
}

inline Dataset read_csv(std::istream &in) {
  auto table = read_table(in, /*require_target=*/true);
  Dataset data;
  data.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    auto rec = ConcreteRecord::from_values(table.rows[i]);
    if (rec.ucs <= 0.0)
      throw ValidationError("row " + std::to_string(i + 1) + ": UCS must be positive");
    data.push_back(rec);
  }
  return data;
}

inline Dataset load_csv(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open " + path);
  return read_csv(in);
}

inline void write_csv(std::ostream &os, const Dataset &data) {
  for (std::size_t i = 0; i < kVariableCount; ++i)
    os << (i ? "," : "") << kColumnNames[i];
  os << '\n';
  for (const auto &r : data) {
    for (std::size_t i = 0; i < kVariableCount; ++i) {
      if (i)
        os << ',';
      detail::write_number(os, r.value(i));
    }
    os << '\n';
  }
}

inline void save_csv(const std::string &path, const Dataset &data) {
  std::ofstream os(path);
  if (!os)
    throw Error("cannot write " + path);
  write_csv(os, data);
}

// ---------------------------------------------------------------------------
// Descriptive statistics
// ---------------------------------------------------------------------------

struct VariableSummary {
  double mean = 0.0;
  double standard_error = 0.0;
  double sample_variance = 0.0;
  double minimum = 0.0;
  double maximum = 0.0;
};

struct DatasetSummary {
  std::array<VariableSummary, kVariableCount> variables{};
  std::size_t n = 0;

  const VariableSummary &ucs() const { return variables[kFeatureCount]; }
};

/// Mean, n-1 sample variance, standard error sqrt(var/n), min and max for
/// every variable. Two-pass variance.
inline DatasetSummary summarize(const Dataset &data) {
  if (data.size() < 2)
    throw InsufficientDataError("summarize needs at least 2 records, got " + std::to_string(data.size()));
  DatasetSummary s;
  s.n = data.size();
  const auto n = static_cast<double>(s.n);
  for (std::size_t v = 0; v < kVariableCount; ++v) {
    double sum = 0.0;
    double lo = data.front().value(v);
    double hi = lo;
    for (const auto &r : data) {
      double x = r.value(v);
      sum += x;
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    double mean = sum / n;
    double ss = 0.0;
    for (const auto &r : data) {
      double d = r.value(v) - mean;
      ss += d * d;
    }
    auto &out = s.variables[v];
    // rounding can push the mean of identical values a hair outside [lo, hi]
    out.mean = std::clamp(mean, lo, hi);
    out.sample_variance = ss / (n - 1.0);
    out.standard_error = std::sqrt(out.sample_variance / n);
    out.minimum = lo;
    out.maximum = hi;
  }
  return s;
}

/// Published descriptive statistics of the 323-sample reference dataset.
inline DatasetSummary reference_summary() {
  DatasetSummary s;
  s.n = 323;
  s.variables = {{
      {48.35, 0.24, 18.79, 35.50, 63.40},
      {8.28, 0.03, 0.34, 6.90, 10.20},
      {75.58, 5.47, 9667.60, 1.00, 388.00},
      {30.71, 0.65, 134.97, 16.00, 80.00},
      {8.24, 0.27, 24.01, 0.00, 20.00},
      {3.04, 0.01, 0.07, 2.20, 3.50},
      {0.43, 0.01, 0.01, 0.25, 0.69},
      {37.13, 0.24, 19.04, 28.00, 45.00},
      {53.64, 0.98, 310.48, 4.23, 96.30},
  }};
  return s;
}

/// Summary in the published table layout: one row per variable.
inline void write_summary_csv(std::ostream &os, const DatasetSummary &s) {
  os << "Parameter,Unit,Mean,Standard Error,Sample Variance,Minimum,Maximum\n";
  for (std::size_t v = 0; v < kVariableCount; ++v) {
    const auto &x = s.variables[v];
    os << kDisplayNames[v] << ',' << kUnits[v];
    for (double d : {x.mean, x.standard_error, x.sample_variance, x.minimum, x.maximum}) {
      os << ',';
      detail::write_number(os, d);
    }
    os << '\n';
  }
}

// ---------------------------------------------------------------------------
// Splitting
// ---------------------------------------------------------------------------

struct Split {
  Dataset train;
  Dataset test;
};

/// Row indices of a seeded Fisher-Yates permutation; the first
/// floor(fraction * n) go to training.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
split_indices(std::size_t n, double train_fraction, std::uint64_t seed) {
  if (n == 0)
    throw InsufficientDataError("cannot split an empty dataset");
  if (!(train_fraction > 0.0 && train_fraction <= 1.0))
    throw ValidationError("train fraction must lie in (0, 1], got " + std::to_string(train_fraction));
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng = make_rng(seed, Stream::split);
  for (std::size_t i = n - 1; i > 0; --i) {
    auto j = static_cast<std::size_t>(unit_uniform(rng) * static_cast<double>(i + 1));
    std::swap(perm[i], perm[j]);
  }
  auto n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n) + 1e-9));
  n_train = std::min(n_train, n);
  std::vector<std::size_t> test(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
  perm.resize(n_train);
  return {std::move(perm), std::move(test)};
}

inline Split split(const Dataset &data, double train_fraction, std::uint64_t seed) {
  auto [train_idx, test_idx] = split_indices(data.size(), train_fraction, seed);
  Split out;
  out.train.reserve(train_idx.size());
  out.test.reserve(test_idx.size());
  for (auto i : train_idx)
    out.train.push_back(data[i]);
  for (auto i : test_idx)
    out.test.push_back(data[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Scaling
// ---------------------------------------------------------------------------

/// Min-max feature scaler fit on a training split. Features map to [0, 1]
/// on the training data and are never clamped. The target range is kept
/// separately: the network predicts UCS mapped onto [0, 1] and
/// `target_to_mpa` brings it back to MPa.
class MinMaxScaler {
public:
  MinMaxScaler() = default;
  MinMaxScaler(FeatureVector min, FeatureVector max, double target_min, double target_max)
      : min_(min), max_(max), target_min_(target_min), target_max_(target_max) {
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      if (!(max_[i] > min_[i]))
        throw ValidationError("degenerate feature " + std::string(kColumnNames[i]) +
                              " (max == min); cannot scale");
    }
    if (!(target_max_ > target_min_))
      throw ValidationError("degenerate target UCS (max == min); cannot scale");
  }

  static MinMaxScaler fit(const Dataset &train) {
    if (train.empty())
      throw InsufficientDataError("cannot fit a scaler on an empty training split");
    FeatureVector lo = train.front().features();
    FeatureVector hi = lo;
    double tlo = train.front().ucs;
    double thi = tlo;
    for (const auto &r : train) {
      auto f = r.features();
      for (std::size_t i = 0; i < kFeatureCount; ++i) {
        lo[i] = std::min(lo[i], f[i]);
        hi[i] = std::max(hi[i], f[i]);
      }
      tlo = std::min(tlo, r.ucs);
      thi = std::max(thi, r.ucs);
    }
    return MinMaxScaler(lo, hi, tlo, thi);
  }

  FeatureVector apply(const FeatureVector &x) const {
    FeatureVector out{};
    for (std::size_t i = 0; i < kFeatureCount; ++i)
      out[i] = (x[i] - min_[i]) / (max_[i] - min_[i]);
    return out;
  }

  FeatureVector invert(const FeatureVector &scaled) const {
    FeatureVector out{};
    for (std::size_t i = 0; i < kFeatureCount; ++i)
      out[i] = min_[i] + scaled[i] * (max_[i] - min_[i]);
    return out;
  }

  // Features scaled; UCS passes through unchanged.
  ConcreteRecord apply(const ConcreteRecord &r) const {
    auto f = apply(r.features());
    return {f[0], f[1], f[2], f[3], f[4], f[5], f[6], f[7], r.ucs};
  }

  double target_to_unit(double ucs_mpa) const {
    return (ucs_mpa - target_min_) / (target_max_ - target_min_);
  }
  double target_to_mpa(double unit) const {
    return target_min_ + unit * (target_max_ - target_min_);
  }

  const FeatureVector &min() const noexcept { return min_; }
  const FeatureVector &max() const noexcept { return max_; }
  double target_min() const noexcept { return target_min_; }
  double target_max() const noexcept { return target_max_; }

  friend bool operator==(const MinMaxScaler &, const MinMaxScaler &) = default;

private:
  FeatureVector min_{};
  FeatureVector max_{};
  double target_min_ = 0.0;
  double target_max_ = 1.0;
};

} // namespace sbo_ann
