#pragma once

// Closed-form norm constants: the printed values, the values the proof
// chains actually assemble to, and certified variants where the two differ.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "besov/params.hpp"

namespace besov {

struct ConstantReport {
  std::string name;
  double displayed = 0.0;        // the printed formula, evaluated
  double proof_assembled = 0.0;  // what the argument steps multiply to
  double rel_discrepancy = 0.0;  // gap between the two, relative
  std::map<std::string, double> inputs;
  std::map<std::string, double> extras;
};

// Schur-test upper constants for the modulus kernel with |k| = m.
// Returns {D_tilde, D}; D dominates D_tilde by the arithmetic-geometric
// inequality on the Gamma arguments. Needs p > 1 for the conjugate exponent.
std::vector<ConstantReport> schur_constants(const Params& pr);

// Lower constant for the fractional-bracket operator, via the radial witness.
// Returns {displayed, proof chain, certified}; the certified entry carries
// the normalizations of the measure the operator actually integrates
// against, the other two reproduce the printed argument verbatim.
std::vector<ConstantReport> lower_T_constants(const Params& pr);

// Lower constant for the projection via the zonal witness. Returns a single
// report; extras carry the corrected chain value together with the witness
// normalization and both moment constants.
ConstantReport lower_P_constants(const Params& pr);

struct StirlingProbe {
  std::vector<double> ps;
  std::vector<double> d_values;   // Schur D at each p
  double slope = 0.0;             // d log D / d log p on the last sampled pair
  double expected_slope = 0.0;    // n + m + alpha, the Stirling prediction
  bool increasing_tail = true;    // monotone from the second sample on
  double value_near_one = 0.0;    // D at the smallest sampled p
};

// samples D along p; defaults to {1.05, 2, 4, 8, 16, 32}
StirlingProbe stirling_limit_probe(const Params& pr, std::span<const double> ps = {});

}  // namespace besov
