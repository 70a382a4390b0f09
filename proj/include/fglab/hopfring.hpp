#ifndef FGLAB_HOPFRING_HPP
#define FGLAB_HOPFRING_HPP

#include "fglab/bp.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fglab {

// Symbolic calculus in the Hopf ring K(n)_* of the even spaces of BP<h>,
// generated by the b-elements and the ring-ring symbols [c] for monomials
// c in pi_* BP<h>.  Scalars are F_p with a tracked v_n exponent.
//
// A factor is a circle-product [c] o b_{j_1} o ... o b_{j_m}; a term is a
// star-product of factors with a scalar; an expression is a sum of terms.
// b_0 is the star-unit of its component and is never stored: coproduct
// slots that receive only b_0 pieces act as units, and a unit composed
// against positive degree collapses through the augmentation.

enum class HopfMode { Full, Q };

struct ReductionContext {
  u32 p = 2, h = 0, n = 2;
  HopfMode mode = HopfMode::Full;
  u32 r = 0;  // coefficient reduction level: kills [p], [v_1], ..., [v_{r-1}]
};
ReductionContext make_context(u32 p, u32 h, u32 n, HopfMode mode, u32 r);

struct HopfFactor {
  GradedPoly sym;       // never the zero polynomial in stored terms
  std::vector<u32> bs;  // sorted, entries >= 1; empty = pure group-like [sym]
  long long space_deg() const;
  long long hom_deg() const;
  bool operator<(const HopfFactor& o) const;
  bool operator==(const HopfFactor& o) const { return sym == o.sym && bs == o.bs; }
};

struct HopfTerm {
  u32 coeff = 1;  // mod p, nonzero in canonical form
  int vn = 0;     // exponent of the K(n)_* periodicity generator
  long long space = 0;
  std::vector<HopfFactor> facs;  // sorted; factors all share space_deg == space
};

class HopfExpr {
public:
  HopfExpr() = default;
  explicit HopfExpr(ReductionContext ctx) : ctx_(ctx) {}

  const ReductionContext& ctx() const { return ctx_; }
  const std::vector<HopfTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  static HopfExpr zero(const ReductionContext& ctx) { return HopfExpr(ctx); }
  static HopfExpr unit(const ReductionContext& ctx, long long space);  // [0]-unit
  // [sym] o b_{j1} o ... with scalar
  static HopfExpr factor_term(const ReductionContext& ctx, const GradedPoly& sym,
                              const std::vector<u32>& bs, u32 coeff = 1);
  static HopfExpr b_power(const ReductionContext& ctx, u32 j, u32 count);  // b_j^{o count}
  static HopfExpr of_term(const ReductionContext& ctx, HopfTerm t);

  HopfExpr operator+(const HopfExpr& o) const;
  HopfExpr operator-(const HopfExpr& o) const;
  HopfExpr scaled(u32 c) const;

  nlohmann::json to_json() const;
  std::string to_string() const { return to_json().dump(); }
  bool operator==(const HopfExpr& o) const { return terms_ == o.terms_; }

private:
  ReductionContext ctx_;
  std::vector<HopfTerm> terms_;
  void push(const HopfTerm& t);
  void canonicalize();
  friend HopfExpr star(const HopfExpr&, const HopfExpr&);
  friend HopfExpr circ(const HopfExpr&, const HopfExpr&);
  friend HopfExpr circ_int(u32, const HopfExpr&);
  friend HopfExpr q_reduce(const HopfExpr&, u32);
  friend std::vector<std::tuple<u32, HopfExpr, HopfExpr>> coproduct(const HopfExpr&);
};

bool operator==(const HopfTerm& a, const HopfTerm& b);

HopfExpr star(const HopfExpr& x, const HopfExpr& y);
HopfExpr circ(const HopfExpr& x, const HopfExpr& y);
// [m] o x via the distributivity axiom, fully expanded (m >= 1)
HopfExpr circ_int(u32 m, const HopfExpr& x);
// tensor summands of the coproduct, with multiplicities
std::vector<std::tuple<u32, HopfExpr, HopfExpr>> coproduct(const HopfExpr& x);
// pass to indecomposables mod [I_r]: star-decomposables die, group-like
// star-factors translate away, symbols reduce mod I_r and split linearly
HopfExpr q_reduce(const HopfExpr& x, u32 r);

// Ravenel-Wilson extraction: the coefficient of s^k in
//   b([p]_{K(n)}(s)) = (star)_i [c_i] o b(s)^{o i}
// as a Q-mode identity at level r, with the c_i taken from the BP<h> p-series
// mod I_r.  The left side vanishes whenever k < p^n, which n > h+1 guarantees
// for every k the chain needs; this is recorded as a side condition.
struct RwIdentity {
  u32 r = 0, k = 0;
  HopfExpr sum;  // Q-normal form of the right side; the identity is sum == 0
  std::vector<std::string> side_conditions;
};
RwIdentity rw_extract(const ReductionContext& ctx, u32 r, u32 k,
                      const std::vector<GradedPoly>& pseries);

// Established Q-zero single factors at a given level, with the divisibility
// discharge: T = [m'] o b_J' vanishes once some established [m] o b_J divides
// it (m | m', J subset of J').
class QZeroStore {
public:
  explicit QZeroStore(ReductionContext ctx) : ctx_(ctx) {}
  bool discharges(const HopfTerm& t, std::string* via = nullptr) const;
  void add(const HopfTerm& t);
  void add_identity(const HopfExpr& e);  // multi-term relation known to vanish
  // x = 0 in Q mod [I_r]: every Q-term discharges, or the remainder is a
  // scalar multiple of a stored relation
  bool q_zero(const HopfExpr& x, u32 r, std::vector<std::string>* trace = nullptr) const;
  const std::vector<HopfTerm>& entries() const { return zeros_; }

private:
  ReductionContext ctx_;
  std::vector<HopfTerm> zeros_;
  std::vector<HopfExpr> idents_;
};

// The lifting lemma as a rewrite rule: if x = 0 in QK(n)/([I_r]) and
// k >= nu(r-1) (k >= 1 when r = 0), then x o b_(0)^{o k} = 0 in full mode.
// Returns the rewritten value (zero); throws std::domain_error when a side
// condition fails or the Q-vanishing cannot be established from the store.
HopfExpr lift_rule(const HopfExpr& x, u32 k, const ReductionContext& level_ctx,
                   const QZeroStore& store);

struct CertStep {
  std::string rule;
  nlohmann::json lhs, rhs;
  std::vector<std::string> side_conditions;
  std::string status;  // "ok" / "failed"
};

struct Certificate {
  u32 p = 0, h = 0, n = 0;
  std::vector<CertStep> steps;
  std::string verdict;  // "VERIFIED" / "REFUTED"
  nlohmann::json to_json() const;
};

// Replays the nilpotence computation u^p = 0 for the bottom class
// u = b_{(0)}^{o nu(h)} in K(n)_* of the 2 nu(h)-th space of BP<h>, n > h+1.
Certificate verify_xpzero(u32 p, u32 h, u32 n);

// f_0 non-nilpotence in F_p[v_h^{+-1}][f]/(f^p - (-1)^(h-1) v_h f):
// f^(p^m) = ((-1)^(h-1) v_h)^(nu(m-1)) f for every m, checked against a
// repeated-multiplication oracle.
struct F0Report {
  u32 p = 0, h = 0;
  struct Row {
    u32 m;
    std::string closed_form;  // printed element
    bool nonzero;
    bool matches_oracle;
  };
  std::vector<Row> rows;
  bool all_nonzero = true;
  nlohmann::json to_json() const;
};
F0Report f0_nonnilpotence(u32 p, u32 h, u32 m_max);

} // namespace fglab

#endif
