#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>

#include "sbo_ann/dataset.hpp"
#include "sbo_ann/optimizers/objective.hpp"

namespace sbo_ann {

/// Applies one key=value setting to a SearchConfig. Unknown keys throw.
inline void apply_setting(SearchConfig &c, std::string_view key, std::string_view value) {
  auto as_double = [&]() {
    auto v = detail::parse_double(value);
    if (!v)
      throw ValidationError("setting " + std::string(key) + ": not a number: '" + std::string(value) + "'");
    return *v;
  };
  auto as_size = [&]() -> std::uint64_t {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size())
      throw ValidationError("setting " + std::string(key) + ": not a non-negative integer: '" +
                            std::string(value) + "'");
    return v;
  };

  if (key == "pop") c.population_size = as_size();
  else if (key == "iters") c.iterations = as_size();
  else if (key == "seed") c.seed = as_size();
  else if (key == "sbo.step_size") c.sbo.step_size = as_double();
  else if (key == "sbo.mutation_probability") c.sbo.mutation_probability = as_double();
  else if (key == "sbo.variance_factor") c.sbo.variance_factor = as_double();
  else if (key == "hgso.clusters") c.hgso.clusters = as_size();
  else if (key == "hgso.l1") c.hgso.l1 = as_double();
  else if (key == "hgso.l2") c.hgso.l2 = as_double();
  else if (key == "hgso.l3") c.hgso.l3 = as_double();
  else if (key == "hgso.alpha") c.hgso.alpha = as_double();
  else if (key == "hgso.beta") c.hgso.beta = as_double();
  else if (key == "hgso.k") c.hgso.k = as_double();
  else if (key == "hgso.epsilon") c.hgso.epsilon = as_double();
  else if (key == "hgso.worst_min") c.hgso.worst_min = as_double();
  else if (key == "hgso.worst_max") c.hgso.worst_max = as_double();
  else if (key == "sfo.pollination_rate") c.sfo.pollination_rate = as_double();
  else if (key == "sfo.mortality_rate") c.sfo.mortality_rate = as_double();
  else if (key == "sfo.step_scale") c.sfo.step_scale = as_double();
  else if (key == "vsa.gamma_shape") c.vsa.gamma_shape = as_double();
  else throw ValidationError("unknown setting '" + std::string(key) + "'");
}

/// Reads `key = value` lines; blank lines and `#` comments are skipped.
inline void read_config(std::istream &in, SearchConfig &c) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    std::string_view view = detail::trim(std::string_view(line).substr(0, hash));
    if (view.empty())
      continue;
    auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw ValidationError("config line " + std::to_string(line_no) + ": expected key=value");
    apply_setting(c, detail::trim(view.substr(0, eq)), detail::trim(view.substr(eq + 1)));
  }
}

inline SearchConfig load_config(const std::string &path, SearchConfig base = {}) {
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open " + path);
  read_config(in, base);
  return base;
}

} // namespace sbo_ann
