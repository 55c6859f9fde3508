#pragma once

#include <array>
#include <string>
#include <string_view>

#include "sbo_ann/optimizers/hgso.hpp"
#include "sbo_ann/optimizers/objective.hpp"
#include "sbo_ann/optimizers/sbo.hpp"
#include "sbo_ann/optimizers/sfo.hpp"
#include "sbo_ann/optimizers/vsa.hpp"

namespace sbo_ann {

enum class Algorithm { sbo, hgso, sfo, vsa };

inline constexpr std::array<Algorithm, 4> kAllAlgorithms = {Algorithm::hgso, Algorithm::sfo, Algorithm::vsa,
                                                            Algorithm::sbo};

inline std::string_view to_string(Algorithm a) {
  switch (a) {
  case Algorithm::sbo: return "sbo";
  case Algorithm::hgso: return "hgso";
  case Algorithm::sfo: return "sfo";
  case Algorithm::vsa: return "vsa";
  }
  return "?";
}

// "ANN-SBO" style label used in report rows.
inline std::string hybrid_label(Algorithm a) {
  std::string s = "ANN-";
  for (char c : to_string(a))
    s.push_back(static_cast<char>(c - 'a' + 'A'));
  return s;
}

inline Algorithm parse_algorithm(std::string_view name) {
  for (auto a : kAllAlgorithms)
    if (to_string(a) == name)
      return a;
  throw ValidationError("unknown algorithm '" + std::string(name) + "' (expected sbo, hgso, sfo or vsa)");
}

inline ConvergenceTrace optimize(Algorithm algorithm, const ObjectiveSpec &objective, const SearchConfig &config) {
  switch (algorithm) {
  case Algorithm::sbo: return optimize_sbo(objective, config);
  case Algorithm::hgso: return optimize_hgso(objective, config);
  case Algorithm::sfo: return optimize_sfo(objective, config);
  case Algorithm::vsa: return optimize_vsa(objective, config);
  }
  throw ValidationError("unknown algorithm");
}

} // namespace sbo_ann
