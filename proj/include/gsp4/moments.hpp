#pragma once

// Geometric sides of the weight average and of the first and second moments,
// assembled from the Petersson kernel, with residual reports against the
// closed-form main terms.

#include "gsp4/arith.hpp"
#include "gsp4/petersson.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace gsp4 {

struct WeightAverage {
  double value = 0.0;  // kernel(I, I) / 8
  double tail = 0.0;
  KernelValue kernel;
};
WeightAverage avg_weight(int k, Int N = 1, const TruncationPolicy& policy = {});

struct MomentPolicy {
  // Target for the certified (n, m) truncation, relative to max(1, |main term|).
  double eps = 1e-8;
  TruncationPolicy kernel{1e-6};
  // Second moment: largest number of off-diagonal kernels to evaluate.
  std::size_t max_kernels = 600;
  // Second moment: keep only the m1 = m2 diagonal term of each kernel.
  bool diagonal_only = false;
};

struct MomentReport {
  std::string kind;  // "moment1" or "moment2"
  int k = 0;
  Int q1 = 1;
  Int q2 = 1;
  Int N = 1;
  double geometric = 0.0;
  double main = 0.0;
  double residual = 0.0;  // geometric - main
  double diagonal = 0.0;  // contribution of the diagonal kernel terms
  double tail = 0.0;      // certified bound for all truncations
  double sum_tail = 0.0;  // part of tail from the (n, m) truncation
  Int m_max = 0;
  double x_max = 0.0;  // n m / conductor beyond which W is bounded by majorants
  std::size_t kernels = 0;
  bool certified = false;  // every kernel certified and the (n, m) tail within eps
};

MomentReport first_moment_geometric(int k, const KroneckerCharacter& q, Int N = 1,
                                    const MomentPolicy& policy = {});
MomentReport second_moment_geometric(int k, const KroneckerCharacter& q1, const KroneckerCharacter& q2,
                                     Int N = 1, const MomentPolicy& policy = {});

struct SweepRow {
  MomentReport report;
  std::string error;  // set when the grid point failed
};

// One report per k (with fixed N) or per N (with fixed k). Failures are
// recorded in the row and the sweep continues.
std::vector<SweepRow> sweep(const std::string& op, const std::vector<int>& ks, const std::vector<Int>& Ns,
                            const KroneckerCharacter& q1, const KroneckerCharacter& q2,
                            const MomentPolicy& policy = {});

// Fixed columns: op,k,q1,q2,N,geometric,main,residual,residual_k,
// residual_sqrt_k,residual_N,tail,m_max,kernels,certified,error.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
std::string sweep_csv_header();

}  // namespace gsp4
