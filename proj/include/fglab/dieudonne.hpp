#ifndef FGLAB_DIEUDONNE_HPP
#define FGLAB_DIEUDONNE_HPP

#include "fglab/padic.hpp"

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace fglab {

// Dense matrix over W(F_{p^d}); column j holds the image of basis vector j.
class WMatrix {
public:
  WMatrix() = default;
  WMatrix(Ring ring, u32 rows, u32 cols);
  static WMatrix identity(const Ring& ring, u32 n);
  static WMatrix scalar(const Ring& ring, u32 n, const Witt& c);

  const Ring& ring() const { return ring_; }
  u32 rows() const { return rows_; }
  u32 cols() const { return cols_; }
  const Witt& at(u32 i, u32 j) const { return data_[i * cols_ + j]; }
  Witt& at(u32 i, u32 j) { return data_[i * cols_ + j]; }

  WMatrix operator*(const WMatrix& o) const;
  WMatrix operator-(const WMatrix& o) const;
  bool operator==(const WMatrix& o) const;

  WMatrix frobenius(int s) const;  // phi^s applied entrywise
  WMatrix inverse() const;         // throws unless determinant is a unit

  // semilinear operator application: v -> M . phi^s(v)
  std::vector<Witt> apply_semilinear(const std::vector<Witt>& v, int s) const;

  // rank of the reduction mod p, by Gaussian elimination over F_{p^d}
  u32 residue_rank() const;

  // determinant of the square submatrix on rows R, cols C (Laplace expansion)
  Witt minor_det(const std::vector<u32>& R, const std::vector<u32>& C) const;

  u32 min_eff() const;
  WMatrix truncated(u32 e) const;

private:
  Ring ring_;
  u32 rows_ = 0, cols_ = 0;
  std::vector<Witt> data_;
};

// Rank-h Dieudonne module presented by matrices: F acts by v -> Fmat.phi(v)
// (phi-semilinear), V by v -> Vmat.phi^{-1}(v) (phi^{-1}-semilinear).
struct DieudonneModule {
  Ring ring;
  u32 rank = 0;
  WMatrix F, V;
};

struct ValidationReport {
  bool shape_ok = false;
  bool fv_ok = false;       // Fmat . phi(Vmat) = p
  bool vf_ok = false;       // Vmat . phi^{-1}(Fmat) = p
  bool covrank_ok = false;  // dim_k(M/VM) equals the expected module dimension
  bool vnilp_ok = false;    // semilinear powers of V mod p vanish at step h
  u32 covdim = 0;           // dim_k(M/VM) actually found
  std::vector<std::string> messages;
  bool pass() const { return shape_ok && fv_ok && vf_ok && covrank_ok && vnilp_ok; }
};

struct Rank1Invariant {
  Witt alpha;  // F u = alpha . u on the generator
  bool is_unit = false;
};

struct MultReport {
  bool multiplicative = false;
  std::string reason;           // "rank" when rank != 1, "class" when alpha class nontrivial
  std::optional<Witt> witness;  // lambda with phi(lambda)/lambda = alpha^{-1}
};

// Checks the Dieudonne-ring relations, V-adic completeness (nilpotence of V
// mod p) and dim_k(M/VM).  Modules of one-dimensional formal groups have
// dim_k(M/VM) = 1, the default; the m-th exterior power of a rank-h module is
// a Dieudonne module with dim_k(M/VM) = C(h-1, m-1), so validation of such an
// output passes expected_covdim accordingly.
ValidationReport validate(const DieudonneModule& M, u32 expected_covdim = 1);

// rank-1 module with F = [alpha], V = [p/alpha]
DieudonneModule make_rank1(const Witt& alpha);
DieudonneModule make_gm_module(const Ring& ring);

// rank-2 module N_a (d = 1 only): Fw1 = a^{-1}w2, Fw2 = pw1, Vw1 = w2, Vw2 = apw1
DieudonneModule make_Na(const Witt& a);

// height-h module with V the cyclic shift: Vu_i = u_{i+1}, Vu_{h-1} = p u_0,
// F u_0 = a^{-1} u_{h-1}, F u_i = p a-free shift down.  a = 1 is the Honda module.
DieudonneModule make_honda_module(const Ring& ring, u32 h);
DieudonneModule make_twisted_honda(const Ring& ring, u32 h, const Witt& a);

DieudonneModule exterior_power(const DieudonneModule& M, u32 m);

Rank1Invariant rank1_invariant(const DieudonneModule& M);

MultReport is_multiplicative(const DieudonneModule& M);

std::pair<bool, Rank1Invariant> top_exterior_is_gm(const DieudonneModule& M);

// base change by unimodular P: F -> P^{-1} F phi(P), V -> P^{-1} V phi^{-1}(P)
DieudonneModule semilinear_conjugate(const DieudonneModule& M, const WMatrix& P);

WMatrix random_unimodular(const Ring& ring, u32 n, std::mt19937_64& rng);
DieudonneModule random_valid_module(const Ring& ring, u32 h, std::mt19937_64& rng);

} // namespace fglab

#endif
