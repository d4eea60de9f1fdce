#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace realspec {

/// One symbolic constituent: (num / den) * basis.
struct ExactTerm {
  enum class Basis { One, Pi, InvPi, Ln2, Pow2 };
  long long num = 0;
  long long den = 1;
  Basis basis = Basis::One;
  // exponent exp_num / exp_den for Basis::Pow2
  long long exp_num = 0;
  long long exp_den = 1;

  double evaluate() const;
  std::string to_string() const;
};

/// A probability the registry knows in closed form or as a quoted
/// reference value.
struct ExactValue {
  std::string label;
  double value = 0.0;
  /// exact, exact_numerical, reference, limit or approximate
  std::string provenance;
  /// Zero for exact entries; the quoted precision otherwise.
  double tolerance = 0.0;
  /// Matrix dimension the probability refers to (P_{n,n}).
  int n = 2;
  std::vector<ExactTerm> terms;

  std::string expression() const;
};

/// All entries, in a stable order.
const std::vector<ExactValue>& registry();

/// Throws LookupError for unknown labels.
const ExactValue& exact_probability(std::string_view label);

/// label,value,tolerance,provenance,expression; value with 17 significant digits.
std::string registry_csv();

}  // namespace realspec
