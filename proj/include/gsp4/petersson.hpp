#pragma once

// The normalized Petersson kernel
//   K_k(T, Q) = delta_{Q ~ T} #Aut(T) + rank-1 sum + 8 pi^2 rank-2 sum,
// with explicit truncation and certified bounds for everything discarded.

#include "gsp4/arith.hpp"
#include "gsp4/gamma.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace gsp4 {

// Rank-1 terms are kept for c s <= rank1_cs_max; rank-2 terms for
// ||C|| <= rank2_norm_max and |det C| <= rank2_det_max. Zero cutoffs are
// chosen by certify_tails; caps bound the work.
struct TruncationPolicy {
  double eps = 1e-8;
  Int rank1_cs_max = 0;
  Int rank2_norm_max = 0;
  Int rank2_det_max = 0;
  Int rank1_cs_cap = 2000;
  Int rank2_norm_cap = 24;
  Int rank2_det_cap = 1152;
};

struct KernelValue {
  double diagonal = 0.0;
  double rank1 = 0.0;
  double rank2 = 0.0;
  double tail_bound = 0.0;
  double total = 0.0;
  double rank1_tail = 0.0;
  double rank2_tail = 0.0;
  TruncationPolicy policy;
  bool certified = false;
  std::string failed;  // cutoffs that could not reach eps within their caps
  std::size_t rank1_terms = 0;
  std::size_t rank2_terms = 0;
};

// Bounds for everything outside the cutoffs (no per-term skipping).
double rank1_tail_bound(const HalfIntegralForm& t, const HalfIntegralForm& q, int k, Int N, Int cs_max);
double rank2_tail_bound(const HalfIntegralForm& t, const HalfIntegralForm& q, int k, Int N, Int norm_max,
                        Int det_max);

// Smallest cutoffs (within the caps) whose tail bounds are at most eps / 4
// each; per-term skipping inside the cutoffs uses the remaining half.
TruncationPolicy certify_tails(const HalfIntegralForm& t, const HalfIntegralForm& q, int k, Int N,
                               const TruncationPolicy& policy);

KernelValue kernel(const HalfIntegralForm& t, const HalfIntegralForm& q, int k, Int N = 1,
                   const TruncationPolicy& policy = {});

// [kernel(T_i, T_j)]; tails receives the matching tail bounds when given.
Eigen::MatrixXd gram(const std::vector<HalfIntegralForm>& ts, int k, Int N = 1,
                     const TruncationPolicy& policy = {}, Eigen::MatrixXd* tails = nullptr);

// Unimodular completions used by the rank-1 term: U with bottom row (u3, u4)
// and V with first column (v1, v3); shift adds that multiple of the given
// row (column) to the completing one.
IntMatrix2 complete_bottom_row(Int u3, Int u4, Int shift = 0);
IntMatrix2 complete_first_column(Int v1, Int v3, Int shift = 0);

// Sum over the two signs and all (U, V) of H(U Q U^T, V^-1 T V^-T; c) for
// one s; shift selects the completions.
Complex rank1_salie_total(const HalfIntegralForm& t, const HalfIntegralForm& q, Int s, Int c, Int shift = 0);

}  // namespace gsp4
