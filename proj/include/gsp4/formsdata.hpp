#pragma once

// Externally computed Fourier-coefficient tables for one-dimensional spaces
// and the cross-ratio check of the kernel against them. The file grammar is
// documented in docs/form_tables.md.

#include "gsp4/arith.hpp"
#include "gsp4/petersson.hpp"

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace gsp4 {

class TableError : public DomainError {
 public:
  using DomainError::DomainError;
};

struct FormEntry {
  HalfIntegralForm form;  // reduced representative
  Int numerator = 0;
  Int denominator = 1;  // > 0
  int line = 0;
  // The classical coefficient A(T).
  double value() const { return double(numerator) / double(denominator); }
};

struct FormTable {
  int weight = 0;
  std::string provenance;
  std::vector<FormEntry> entries;
};

FormTable parse_table(std::string_view text);
FormTable load_table(const std::string& path);

// a(T) = A(T) det(T)^{-(k/2 - 3/4)}, the normalization in which the kernel is
// a Gram matrix.
double normalized_coefficient(const FormEntry& e, int k);

struct KernelEntry {
  double value = 0.0;
  double tail = 0.0;
};
using KernelFunction = std::function<KernelEntry(const HalfIntegralForm&, const HalfIntegralForm&)>;

struct RatioRow {
  std::size_t i = 0;
  std::size_t j = 0;
  double kernel_ratio = 0.0;       // K(T_i, T_j) / K(T_r, T_r)
  double coefficient_ratio = 0.0;  // a(T_i) a(T_j) / a(T_r)^2
  double discrepancy = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct RatioReport {
  std::size_t reference = 0;  // r: the entry with the largest |a(T)|
  std::vector<RatioRow> rows;
  double max_discrepancy = 0.0;
  bool pass = false;
};

// Compares every K(T_i, T_j) / K(T_r, T_r) with a(T_i) a(T_j) / a(T_r)^2. The
// tolerance of a row is floor plus the propagated kernel tails.
RatioReport ratio_check(const FormTable& table, const KernelFunction& kernel_fn, double floor = 1e-3);
RatioReport ratio_check(const FormTable& table, const TruncationPolicy& policy, Int N = 1, double floor = 1e-3);

}  // namespace gsp4
