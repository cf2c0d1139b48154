#pragma once

// The oscillatory double integral Psi(C; h1, h2) of the second-moment
// off-diagonal analysis, evaluated by nested quadrature (best effort).

#include "gsp4/arith.hpp"
#include "gsp4/gamma.hpp"

namespace gsp4 {

struct PsiValue {
  Complex value;
  double error = 0.0;  // difference to the same rule with half the panels
  double cutoff1 = 0.0;
  double cutoff2 = 0.0;
};

// int int W(n1 x1/|q1|^2) W(n2 x2/|q2|^2) (x1 x2)^{-1/2} Jcal_l(x1 x2 (C^T C)^{-1})
//   e((x1 h1 + x2 h2)/|det C|) dx1 dx2 over x1, x2 > 0.
PsiValue eval_Psi(const IntMatrix2& c, Int h1, Int h2, Int n1, Int n2, const KroneckerCharacter& q1,
                  const KroneckerCharacter& q2, int k);

}  // namespace gsp4
