#pragma once

// Exponential sums: the coset space X(C), the symplectic Kloosterman sum
// K(Q, T; C), the Salie-type sum H(P, S; c) and the twisted sum over GO_2.

#include "gsp4/arith.hpp"
#include "gsp4/gamma.hpp"

#include <array>
#include <functional>
#include <vector>

namespace gsp4 {

// e(num / den) with the fraction reduced exactly before rounding.
Complex unit_phase(Int num, Int den);

struct SymplecticCosetRep {
  IntMatrix2 A;
  IntMatrix2 B;
  IntMatrix2 D;
};

struct CosetFamily {
  IntMatrix2 C;
  std::vector<SymplecticCosetRep> reps;
  std::size_t size() const { return reps.size(); }
};

// (A B; C D) in Sp4(Z).
bool is_symplectic(const IntMatrix2& a, const IntMatrix2& b, const IntMatrix2& c, const IntMatrix2& d);

// Canonical representatives of A modulo {S C} and D modulo {C S}, S integral
// symmetric, via an echelon basis of the shift lattice.
IntMatrix2 canonical_A(const IntMatrix2& a, const IntMatrix2& c);
IntMatrix2 canonical_D(const IntMatrix2& d, const IntMatrix2& c);
// Sorted list of canonical (A, D) pairs, used to compare families.
std::vector<std::pair<IntMatrix2, IntMatrix2>> canonical_pairs(const CosetFamily& f);

bool is_diagonal_reduced(const IntMatrix2& c);
bool is_go2(const IntMatrix2& c);

// X(C) for C in GO_2(Z) or C = diag(e1, e2) with 0 < e1 | e2.
CosetFamily enumerate_XC(const IntMatrix2& c);
// Independent oracle: exhaustive search with a full Sp4 membership test.
CosetFamily brute_force_XC(const IntMatrix2& c, Int modulus_box);

// Calls f(A, D) once for every double coset with C = diag(e1, e2).
void for_each_diagonal_coset(Int e1, Int e2,
                             const std::function<void(const IntMatrix2&, const IntMatrix2&)>& f);

// K(Q, T; C) = sum e(tr(A C^-1 Q + C^-1 D T)).
Complex kloosterman_K(const HalfIntegralForm& q, const HalfIntegralForm& t, const IntMatrix2& c);
// The same for C = diag(e1, e2) without building the family.
Complex kloosterman_diagonal(const HalfIntegralForm& q, const HalfIntegralForm& t, Int e1, Int e2);

// H^{sign}(P, S; c).
Complex salie_H(int sign, const HalfIntegralForm& p, const HalfIntegralForm& s, Int c);

// The character-twisted sum over X(C) and residues mu1, mu2, and its closed form.
Complex curly_K(const GOElement& c, const KroneckerCharacter& q1, const KroneckerCharacter& q2);
Complex curly_K_closed(const GOElement& c, const KroneckerCharacter& q1, const KroneckerCharacter& q2);

}  // namespace gsp4
