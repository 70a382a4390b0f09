#include "fglab/dieudonne.hpp"

#include <algorithm>
#include <stdexcept>

namespace fglab {

namespace {

std::vector<std::vector<u32>> subsets_lex(u32 n, u32 m) {
  std::vector<std::vector<u32>> out;
  if (m > n) return out;
  std::vector<u32> cur(m);
  for (u32 i = 0; i < m; ++i) cur[i] = i;
  for (;;) {
    out.push_back(cur);
    // next lex combination
    int i = (int)m - 1;
    while (i >= 0 && cur[i] == n - m + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (u32 j = (u32)i + 1; j < m; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

// residue matrix utilities (entries are packed F_q indices)
struct FqMat {
  u32 rows, cols;
  std::vector<u32> a;
  u32& at(u32 i, u32 j) { return a[i * cols + j]; }
  u32 at(u32 i, u32 j) const { return a[i * cols + j]; }
};

FqMat reduce_mat(const WMatrix& M) {
  FqMat r{M.rows(), M.cols(), std::vector<u32>((std::size_t)M.rows() * M.cols(), 0)};
  for (u32 i = 0; i < M.rows(); ++i)
    for (u32 j = 0; j < M.cols(); ++j) r.at(i, j) = M.at(i, j).reduce().idx();
  return r;
}

FqMat fq_mat_mul(const Ring& R, const FqMat& x, const FqMat& y) {
  FqMat r{x.rows, y.cols, std::vector<u32>((std::size_t)x.rows * y.cols, 0)};
  for (u32 i = 0; i < x.rows; ++i)
    for (u32 k = 0; k < x.cols; ++k) {
      if (!x.at(i, k)) continue;
      for (u32 j = 0; j < y.cols; ++j)
        r.at(i, j) = R->fq_add(r.at(i, j), R->fq_mul(x.at(i, k), y.at(k, j)));
    }
  return r;
}

u32 fq_mat_rank(const Ring& R, FqMat m) {
  u32 rank = 0;
  for (u32 col = 0; col < m.cols && rank < m.rows; ++col) {
    u32 piv = rank;
    while (piv < m.rows && m.at(piv, col) == 0) ++piv;
    if (piv == m.rows) continue;
    for (u32 j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(rank, j));
    u32 inv = R->fq_inv(m.at(rank, col));
    for (u32 j = 0; j < m.cols; ++j) m.at(rank, j) = R->fq_mul(m.at(rank, j), inv);
    for (u32 i = 0; i < m.rows; ++i) {
      if (i == rank || m.at(i, col) == 0) continue;
      u32 c = m.at(i, col);
      for (u32 j = 0; j < m.cols; ++j)
        m.at(i, j) = R->fq_sub(m.at(i, j), R->fq_mul(c, m.at(rank, j)));
    }
    ++rank;
  }
  return rank;
}

}  // namespace

WMatrix::WMatrix(Ring ring, u32 rows, u32 cols) : ring_(std::move(ring)), rows_(rows), cols_(cols) {
  data_.assign((std::size_t)rows_ * cols_, ring_->zero());
}

WMatrix WMatrix::identity(const Ring& ring, u32 n) {
  WMatrix m(ring, n, n);
  for (u32 i = 0; i < n; ++i) m.at(i, i) = ring->one();
  return m;
}

WMatrix WMatrix::scalar(const Ring& ring, u32 n, const Witt& c) {
  WMatrix m(ring, n, n);
  for (u32 i = 0; i < n; ++i) m.at(i, i) = c;
  return m;
}

WMatrix WMatrix::operator*(const WMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("WMatrix: shape mismatch in product");
  WMatrix r(ring_, rows_, o.cols_);
  for (u32 i = 0; i < rows_; ++i)
    for (u32 k = 0; k < cols_; ++k) {
      if (at(i, k).is_zero()) continue;
      for (u32 j = 0; j < o.cols_; ++j) r.at(i, j) = r.at(i, j) + at(i, k) * o.at(k, j);
    }
  return r;
}

WMatrix WMatrix::operator-(const WMatrix& o) const {
  WMatrix r(ring_, rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
  return r;
}

bool WMatrix::operator==(const WMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) return false;
  for (std::size_t i = 0; i < data_.size(); ++i)
    if (data_[i] != o.data_[i]) return false;
  return true;
}

WMatrix WMatrix::frobenius(int s) const {
  WMatrix r(ring_, rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i].frobenius(s);
  return r;
}

WMatrix WMatrix::inverse() const {
  if (rows_ != cols_) throw std::invalid_argument("WMatrix: inverse of non-square matrix");
  const u32 n = rows_;
  WMatrix a = *this;
  WMatrix inv = identity(ring_, n).truncated(min_eff());
  for (u32 col = 0; col < n; ++col) {
    u32 piv = col;
    while (piv < n && !a.at(piv, col).is_unit()) ++piv;
    if (piv == n) throw std::domain_error("WMatrix: matrix is not unimodular");
    if (piv != col)
      for (u32 j = 0; j < n; ++j) {
        std::swap(a.at(piv, j), a.at(col, j));
        std::swap(inv.at(piv, j), inv.at(col, j));
      }
    Witt s = a.at(col, col).inv();
    for (u32 j = 0; j < n; ++j) {
      a.at(col, j) = a.at(col, j) * s;
      inv.at(col, j) = inv.at(col, j) * s;
    }
    for (u32 i = 0; i < n; ++i) {
      if (i == col || a.at(i, col).is_zero()) continue;
      Witt c = a.at(i, col);
      for (u32 j = 0; j < n; ++j) {
        a.at(i, j) = a.at(i, j) - c * a.at(col, j);
        inv.at(i, j) = inv.at(i, j) - c * inv.at(col, j);
      }
    }
  }
  return inv;
}

std::vector<Witt> WMatrix::apply_semilinear(const std::vector<Witt>& v, int s) const {
  if (v.size() != cols_) throw std::invalid_argument("WMatrix: vector length mismatch");
  std::vector<Witt> out(rows_, ring_->zero());
  for (u32 i = 0; i < rows_; ++i)
    for (u32 j = 0; j < cols_; ++j) out[i] = out[i] + at(i, j) * v[j].frobenius(s);
  return out;
}

u32 WMatrix::residue_rank() const { return fq_mat_rank(ring_, reduce_mat(*this)); }

Witt WMatrix::minor_det(const std::vector<u32>& R, const std::vector<u32>& C) const {
  if (R.size() != C.size()) throw std::invalid_argument("WMatrix: minor shape");
  if (R.empty()) return ring_->one();
  if (R.size() == 1) return at(R[0], C[0]);
  Witt acc = ring_->zero();
  std::vector<u32> subR(R.begin() + 1, R.end());
  for (std::size_t j = 0; j < C.size(); ++j) {
    const Witt& a = at(R[0], C[j]);
    if (a.is_zero()) continue;
    std::vector<u32> subC;
    subC.reserve(C.size() - 1);
    for (std::size_t k = 0; k < C.size(); ++k)
      if (k != j) subC.push_back(C[k]);
    Witt term = a * minor_det(subR, subC);
    acc = (j % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

u32 WMatrix::min_eff() const {
  u32 e = ring_->N;
  for (const auto& x : data_) e = std::min(e, x.eff());
  return e;
}

WMatrix WMatrix::truncated(u32 e) const {
  WMatrix r(ring_, rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i].truncated(e);
  return r;
}

ValidationReport validate(const DieudonneModule& M, u32 expected_covdim) {
  ValidationReport rep;
  const u32 h = M.rank;
  if (h < 1 || M.F.rows() != h || M.F.cols() != h || M.V.rows() != h || M.V.cols() != h) {
    rep.messages.push_back("matrix shapes do not match rank");
    return rep;
  }
  rep.shape_ok = true;
  const Ring& R = M.ring;
  u32 e = std::min(M.F.min_eff(), M.V.min_eff());
  WMatrix pid = WMatrix::scalar(R, h, R->from_int(R->p)).truncated(e);

  WMatrix fv = M.F * M.V.frobenius(1);
  rep.fv_ok = (fv == pid);
  if (!rep.fv_ok) rep.messages.push_back("F . phi(V) != p . id");

  WMatrix vf = M.V * M.F.frobenius(-1);
  rep.vf_ok = (vf == pid);
  if (!rep.vf_ok) rep.messages.push_back("V . phi^{-1}(F) != p . id");

  u32 vr = M.V.residue_rank();
  rep.covdim = h - vr;
  rep.covrank_ok = (rep.covdim == expected_covdim);
  if (!rep.covrank_ok)
    rep.messages.push_back("dim_k(M/VM) = " + std::to_string(rep.covdim) + ", expected " +
                           std::to_string(expected_covdim));

  // (V mod p) as a semilinear operator, composed h times
  FqMat vbar = reduce_mat(M.V);
  FqMat acc = vbar;
  for (u32 k = 1; k < h; ++k) {
    FqMat tw = vbar;
    for (auto& x : tw.a) x = R->fq_frob(x, -(int)k);
    acc = fq_mat_mul(R, acc, tw);
  }
  rep.vnilp_ok = std::all_of(acc.a.begin(), acc.a.end(), [](u32 x) { return x == 0; });
  if (!rep.vnilp_ok) rep.messages.push_back("V is not topologically nilpotent mod p");
  return rep;
}

DieudonneModule make_rank1(const Witt& alpha) {
  const Ring& R = alpha.ring();
  if (!alpha.is_unit()) throw std::invalid_argument("make_rank1: alpha must be a unit");
  DieudonneModule M;
  M.ring = R;
  M.rank = 1;
  M.F = WMatrix(R, 1, 1);
  M.V = WMatrix(R, 1, 1);
  M.F.at(0, 0) = alpha;
  M.V.at(0, 0) = R->from_int(R->p) * alpha.frobenius(-1).inv();
  return M;
}

DieudonneModule make_gm_module(const Ring& ring) { return make_rank1(ring->one()); }

DieudonneModule make_Na(const Witt& a) {
  const Ring& R = a.ring();
  if (R->d != 1) throw std::invalid_argument("make_Na: defined over W(F_p) only (d = 1)");
  if (!a.is_unit()) throw std::invalid_argument("make_Na: a must be a unit");
  DieudonneModule M;
  M.ring = R;
  M.rank = 2;
  M.F = WMatrix(R, 2, 2);
  M.V = WMatrix(R, 2, 2);
  Witt p = R->from_int(R->p);
  M.F.at(1, 0) = a.inv();   // F w1 = a^{-1} w2
  M.F.at(0, 1) = p;         // F w2 = p w1
  M.V.at(1, 0) = R->one();  // V w1 = w2
  M.V.at(0, 1) = a * p;     // V w2 = a p w1
  return M;
}

DieudonneModule make_twisted_honda(const Ring& ring, u32 h, const Witt& a) {
  if (h < 1) throw std::invalid_argument("make_twisted_honda: rank must be >= 1");
  if (!a.is_unit()) throw std::invalid_argument("make_twisted_honda: a must be a unit");
  if (h == 1) return make_rank1(a.inv());
  DieudonneModule M;
  M.ring = ring;
  M.rank = h;
  M.F = WMatrix(ring, h, h);
  M.V = WMatrix(ring, h, h);
  Witt p = ring->from_int(ring->p);
  // V u_i = u_{i+1} for i < h-1, V u_{h-1} = p phi^{-1}(a) u_0
  for (u32 i = 0; i + 1 < h; ++i) M.V.at(i + 1, i) = ring->one();
  M.V.at(0, h - 1) = p * a.frobenius(-1);
  // F u_0 = a^{-1} u_{h-1}, F u_i = p u_{i-1} for i >= 1
  M.F.at(h - 1, 0) = a.inv();
  for (u32 i = 1; i < h; ++i) M.F.at(i - 1, i) = p;
  return M;
}

DieudonneModule make_honda_module(const Ring& ring, u32 h) {
  return make_twisted_honda(ring, h, ring->one());
}

DieudonneModule exterior_power(const DieudonneModule& M, u32 m) {
  if (m < 1 || m > M.rank) throw std::invalid_argument("exterior_power: need 1 <= m <= rank");
  const Ring& R = M.ring;
  auto subs = subsets_lex(M.rank, m);
  const u32 n = (u32)subs.size();
  DieudonneModule E;
  E.ring = R;
  E.rank = n;
  E.F = WMatrix(R, n, n);
  E.V = WMatrix(R, n, n);
  for (u32 i = 0; i < n; ++i)
    for (u32 j = 0; j < n; ++j) {
      Witt fm = M.F.minor_det(subs[i], subs[j]);
      if (!fm.divisible_by_p(m - 1))
        throw std::domain_error(
            "exterior_power: Lambda^m(F) entry not divisible by p^(m-1); "
            "invalid module or insufficient precision");
      E.F.at(i, j) = (m > 1) ? fm.div_by_p(m - 1) : fm;
      E.V.at(i, j) = M.V.minor_det(subs[i], subs[j]);
    }
  u32 e = std::min(E.F.min_eff(), E.V.min_eff());
  E.F = E.F.truncated(e);
  E.V = E.V.truncated(e);
  return E;
}

Rank1Invariant rank1_invariant(const DieudonneModule& M) {
  if (M.rank != 1) throw std::invalid_argument("rank1_invariant: module must have rank 1");
  Rank1Invariant r;
  r.alpha = M.F.at(0, 0);
  r.is_unit = r.alpha.is_unit();
  return r;
}

MultReport is_multiplicative(const DieudonneModule& M) {
  MultReport rep;
  if (M.rank != 1) {
    rep.reason = "rank";
    return rep;
  }
  const Ring& R = M.ring;
  Rank1Invariant inv = rank1_invariant(M);
  if (!inv.is_unit) {
    rep.reason = "class";
    return rep;
  }
  const Witt& alpha = inv.alpha;
  if (R->d == 1) {
    if (alpha == R->one()) {
      rep.multiplicative = true;
      rep.witness = R->one().truncated(alpha.eff());
    } else {
      rep.reason = "class";
    }
    return rep;
  }
  // unramified Hilbert 90: the class of alpha is trivial iff norm(alpha) = 1;
  // then phi(lambda) = alpha^{-1} lambda has a unit solution, found digit by digit
  if (!(alpha.norm() == R->one())) {
    rep.reason = "class";
    return rep;
  }
  Witt ainv = alpha.inv();
  u32 effw = ainv.eff();
  u32 lam0 = 0;
  for (u32 v = 1; v < R->q && !lam0; ++v) {
    if (R->fq_frob(v, 1) == R->fq_mul(ainv.reduce().idx(), v)) lam0 = v;
  }
  if (!lam0) {
    rep.reason = "class";
    return rep;
  }
  Witt lam = R->lift(Residue(R, lam0)).truncated(effw);
  for (u32 k = 1; k < effw; ++k) {
    Witt err = lam.frobenius(1) * alpha * lam.inv() - R->one();
    if (err.is_zero()) break;
    if (!err.divisible_by_p(k)) throw std::logic_error("is_multiplicative: digit lift lost precision");
    u32 eps = err.div_by_p(k).reduce().idx();
    if (eps == 0) continue;
    // Artin-Schreier step: c - phi(c) = eps
    bool found = false;
    for (u32 c = 0; c < R->q; ++c) {
      if (R->fq_sub(c, R->fq_frob(c, 1)) == eps) {
        Witt corr = R->one().truncated(effw) +
                    R->lift(Residue(R, c)).truncated(effw).mul_int((long long)R->pow_p(k));
        lam = lam * corr;
        found = true;
        break;
      }
    }
    if (!found) {
      rep.reason = "class";
      return rep;
    }
  }
  if (!(lam.frobenius(1) * alpha == lam)) {
    rep.reason = "class";
    return rep;
  }
  rep.multiplicative = true;
  rep.witness = lam;
  return rep;
}

std::pair<bool, Rank1Invariant> top_exterior_is_gm(const DieudonneModule& M) {
  DieudonneModule top = exterior_power(M, M.rank);
  Rank1Invariant inv = rank1_invariant(top);
  MultReport rep = is_multiplicative(top);
  return {rep.multiplicative, inv};
}

DieudonneModule semilinear_conjugate(const DieudonneModule& M, const WMatrix& P) {
  DieudonneModule C;
  C.ring = M.ring;
  C.rank = M.rank;
  WMatrix pinv = P.inverse();
  C.F = pinv * M.F * P.frobenius(1);
  C.V = pinv * M.V * P.frobenius(-1);
  return C;
}

WMatrix random_unimodular(const Ring& ring, u32 n, std::mt19937_64& rng) {
  WMatrix P = WMatrix::identity(ring, n);
  for (u32 i = 0; i < n; ++i) {
    u64 u;
    do {
      u = rng() % ring->pN;
    } while (u % ring->p == 0);
    P.at(i, i) = ring->from_int((long long)u);
  }
  for (u32 step = 0; step < 2 * n * n; ++step) {
    u32 i = (u32)(rng() % n), j = (u32)(rng() % n);
    if (i == j) continue;
    std::vector<u64> c(ring->d);
    for (auto& x : c) x = rng() % ring->pN;
    Witt w = ring->from_coords(c);
    for (u32 k = 0; k < n; ++k) P.at(i, k) = P.at(i, k) + w * P.at(j, k);
  }
  return P;
}

DieudonneModule random_valid_module(const Ring& ring, u32 h, std::mt19937_64& rng) {
  // seeds: the multiplicative module and its twists at rank 1, twisted shift
  // modules at higher rank; conjugation scrambles the presentation
  u64 u;
  do {
    u = rng() % ring->pN;
  } while (u % ring->p == 0);
  Witt a = ring->from_int((long long)u);
  DieudonneModule seed = (h == 1 && (rng() & 1)) ? make_gm_module(ring) : make_twisted_honda(ring, h, a);
  WMatrix P = random_unimodular(ring, h, rng);
  return semilinear_conjugate(seed, P);
}

} // namespace fglab
