#pragma once

// k-linear categories presented by a quiver with homogeneous relations,
// realized on a finite set of objects. Hom spaces get bases of reduced paths,
// computed by linear elimination one (source, length, target) stratum at a
// time. Paths are written diagrammatically: {a, b} means "a, then b".

#include <algorithm>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "qshape/linalg.hpp"

namespace qshape {

struct WindowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AdmissibilityError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class Kind { Finite, Linear, NLinear, Cyclic, ZA3 };

inline std::string kind_name(Kind k) {
  switch (k) {
    case Kind::Finite: return "finite";
    case Kind::Linear: return "linear";
    case Kind::NLinear: return "nlinear";
    case Kind::Cyclic: return "cyclic";
    case Kind::ZA3: return "za3";
  }
  return "?";
}

/// Where the realized objects sit inside the (possibly infinite) quiver.
struct Shape {
  Kind kind = Kind::Finite;
  int param = 0;                         // N for nlinear, m for cyclic
  std::vector<std::vector<int>> coords;  // per object: {degree} or {x, y}
  int lo = 0, hi = 0;                    // window for infinite kinds

  bool is_linear() const { return kind == Kind::Linear || kind == Kind::NLinear; }
  /// Degree N with d^N = 0 for linear kinds (2 for plain complexes).
  int complex_order() const { return kind == Kind::NLinear ? param : 2; }
};

struct ArrowData {
  std::string name;   // arrow type, e.g. "d"
  std::string label;  // instance, e.g. "d@3"
  std::size_t src = 0, tgt = 0;
};

struct PathTerm {
  mpq_class coeff;
  std::vector<std::size_t> path;
};

struct RelationData {
  std::string label;
  std::size_t src = 0, tgt = 0;
  std::vector<PathTerm> terms;
};

struct Presentation {
  std::vector<std::string> objects;
  std::vector<ArrowData> arrows;
  std::vector<RelationData> relations;
  std::vector<bool> open_in, open_out;  // arrows entering / leaving the realized part
  Shape shape;
};

struct Nilpotence {
  bool ok = true;
  bool hom_finite = true;
  bool locally_bounded = true;
  std::size_t degree = 1;  // least N with r^N = 0
  std::string witness;
};

template <class F>
class KCategory {
 public:
  using E = Elem<F>;
  using Path = std::vector<std::size_t>;

  static std::shared_ptr<const KCategory> build(const F& field, Presentation pres);
  /// The tensor category Q (x) A: objects (q, v), morphisms Q(p,q) (x) A(u,v).
  static std::shared_ptr<const KCategory> product(const KCategory& q, const KCategory& a);

  std::shared_ptr<const KCategory> opposite() const {
    if (!pres_) throw std::logic_error("opposite: category has no presentation");
    Presentation op = *pres_;
    for (auto& a : op.arrows) std::swap(a.src, a.tgt);
    for (auto& r : op.relations) {
      std::swap(r.src, r.tgt);
      for (auto& t : r.terms) std::reverse(t.path.begin(), t.path.end());
    }
    std::swap(op.open_in, op.open_out);
    return build(field_, std::move(op));
  }

  const F& field() const { return field_; }
  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<std::size_t> find(const std::string& l) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == l) return i;
    return std::nullopt;
  }
  const Shape& shape() const { return shape_; }
  const Presentation* presentation() const { return pres_ ? &*pres_ : nullptr; }

  std::size_t dim(std::size_t p, std::size_t q) const { return homs_[p * size() + q].paths.size(); }
  std::size_t rad_dim(std::size_t p, std::size_t q) const {
    const auto d = dim(p, q);
    return p == q && d > 0 ? d - 1 : d;
  }
  const Path& path(std::size_t p, std::size_t q, std::size_t i) const { return homs_[p * size() + q].paths.at(i); }
  std::size_t length(std::size_t p, std::size_t q, std::size_t i) const {
    return homs_[p * size() + q].lengths.at(i);
  }
  std::size_t total_dim() const {
    std::size_t s = 0;
    for (const auto& h : homs_) s += h.paths.size();
    return s;
  }

  /// Structure constants c[(i*d(p,q) + j)*d(p,r) + k]: coefficient of basis k
  /// of Q(p,r) in (basis i of Q(q,r)) o (basis j of Q(p,q)). nullptr if any of
  /// the three spaces vanishes.
  const std::vector<E>* table(std::size_t p, std::size_t q, std::size_t r) const {
    auto it = tables_.find((p * size() + q) * size() + r);
    return it == tables_.end() ? nullptr : &it->second;
  }

  /// g o f for g in Q(q,r), f in Q(p,q).
  Vec<F> compose(std::size_t p, std::size_t q, std::size_t r, const Vec<F>& g, const Vec<F>& f) const {
    const auto dpq = dim(p, q), dqr = dim(q, r), dpr = dim(p, r);
    if (g.size() != dqr || f.size() != dpq) throw DimensionError("compose: endpoint mismatch");
    Vec<F> out(dpr, field_.zero());
    const auto* c = table(p, q, r);
    if (!c) return out;
    for (std::size_t i = 0; i < dqr; ++i) {
      if (is_zero(g[i])) continue;
      for (std::size_t j = 0; j < dpq; ++j) {
        if (is_zero(f[j])) continue;
        const auto gf = g[i] * f[j];
        const auto* row = &(*c)[(i * dpq + j) * dpr];
        for (std::size_t k = 0; k < dpr; ++k)
          if (!is_zero(row[k])) out[k] += gf * row[k];
      }
    }
    return out;
  }

  Vec<F> identity(std::size_t p) const { return unit_vec(field_, dim(p, p), 0); }

  const std::vector<ArrowData>& arrows() const { return arrows_; }
  const std::vector<RelationData>& relations() const { return relations_; }
  /// Basis index of arrow a inside Q(src, tgt).
  std::size_t arrow_index(std::size_t a) const { return arrow_index_.at(a); }
  Vec<F> arrow_element(std::size_t a) const {
    const auto& ar = arrows_.at(a);
    return unit_vec(field_, dim(ar.src, ar.tgt), arrow_index(a));
  }

  bool open_in(std::size_t p) const { return open_in_[p]; }
  bool open_out(std::size_t p) const { return open_out_[p]; }
  /// Every morphism out of p stays inside the realized objects.
  bool out_complete(std::size_t p) const { return out_complete_[p]; }
  bool in_complete(std::size_t p) const { return in_complete_[p]; }
  bool settled(std::size_t p) const { return out_complete_[p] && in_complete_[p]; }

  const Nilpotence& nilpotence() const { return nil_; }
  std::size_t max_relation_length() const { return max_rel_; }

 private:
  struct Hom {
    std::vector<Path> paths;
    std::vector<std::size_t> lengths;
  };

  explicit KCategory(F field) : field_(std::move(field)) {}

  void finish_common() {
    const auto n = size();
    arrow_index_.assign(arrows_.size(), 0);
    for (std::size_t a = 0; a < arrows_.size(); ++a) {
      const auto& h = homs_[arrows_[a].src * n + arrows_[a].tgt];
      auto it = std::find(h.paths.begin(), h.paths.end(), Path{a});
      if (it == h.paths.end()) throw AdmissibilityError("arrow " + arrows_[a].label + " vanishes modulo the relations");
      arrow_index_[a] = static_cast<std::size_t>(it - h.paths.begin());
    }
    out_complete_.assign(n, true);
    in_complete_.assign(n, true);
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t b = 0; b < n; ++b) {
        if (open_out_[b] && dim(p, b) > 0) out_complete_[p] = false;
        if (open_in_[b] && dim(b, p) > 0) in_complete_[p] = false;
      }
  }

  F field_;
  std::vector<std::string> labels_;
  std::vector<ArrowData> arrows_;
  std::vector<RelationData> relations_;
  std::vector<bool> open_in_, open_out_, out_complete_, in_complete_;
  std::vector<Hom> homs_;
  std::unordered_map<std::size_t, std::vector<E>> tables_;
  std::vector<std::size_t> arrow_index_;
  Shape shape_;
  std::optional<Presentation> pres_;
  Nilpotence nil_;
  std::size_t max_rel_ = 0;
};

namespace detail {

inline std::string path_text(const std::vector<ArrowData>& arrows, const std::vector<std::size_t>& p) {
  if (p.empty()) return "id";
  std::string s;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (k) s += ";";
    s += arrows[p[k]].label;
  }
  return s;
}

// Sort key: arrow-name sequence, then arrow ids.
inline bool path_less(const std::vector<ArrowData>& arrows, const std::vector<std::size_t>& a,
                      const std::vector<std::size_t>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t k = 0; k < a.size(); ++k) {
    const auto& na = arrows[a[k]].name;
    const auto& nb = arrows[b[k]].name;
    if (na != nb) return na < nb;
  }
  return a < b;
}

}  // namespace detail

template <class F>
std::shared_ptr<const KCategory<F>> KCategory<F>::build(const F& field, Presentation pres) {
  std::shared_ptr<KCategory> c(new KCategory(field));
  const std::size_t n = pres.objects.size();
  c->labels_ = pres.objects;
  c->arrows_ = pres.arrows;
  c->relations_ = pres.relations;
  c->open_in_ = pres.open_in;
  c->open_out_ = pres.open_out;
  c->open_in_.resize(n, false);
  c->open_out_.resize(n, false);
  c->shape_ = pres.shape;
  const auto& arrows = c->arrows_;

  for (const auto& a : arrows)
    if (a.src >= n || a.tgt >= n) throw AdmissibilityError("arrow " + a.label + " has an unknown endpoint");

  std::size_t max_rel = 0;
  for (const auto& rel : c->relations_) {
    if (rel.terms.empty()) throw AdmissibilityError("relation " + rel.label + " has no terms");
    const auto len = rel.terms.front().path.size();
    for (const auto& t : rel.terms) {
      if (t.path.size() < 2)
        throw AdmissibilityError("relation " + rel.label + " has a term of length < 2");
      if (t.path.size() != len)
        throw AdmissibilityError("relation " + rel.label + " is not homogeneous in path length");
      std::size_t cur = rel.src;
      for (auto a : t.path) {
        if (a >= arrows.size() || arrows[a].src != cur)
          throw AdmissibilityError("relation " + rel.label + " has a non-composable term");
        cur = arrows[a].tgt;
      }
      if (cur != rel.tgt) throw AdmissibilityError("relation " + rel.label + " terms end at different objects");
    }
    max_rel = std::max(max_rel, len);
  }
  c->max_rel_ = max_rel;
  const std::size_t bound = 2 * n + std::max<std::size_t>(max_rel, 1);

  std::vector<std::vector<std::size_t>> rel_into(n);
  for (std::size_t k = 0; k < c->relations_.size(); ++k) rel_into[c->relations_[k].tgt].push_back(k);
  std::vector<std::vector<std::size_t>> arrows_into(n);
  for (std::size_t a = 0; a < arrows.size(); ++a) arrows_into[arrows[a].tgt].push_back(a);

  // levels[p][l][q] = basis paths; mult[p][l][a] = right multiplication by a.
  std::vector<std::vector<std::vector<std::vector<Path>>>> levels(n);
  std::vector<std::vector<std::vector<Matrix<F>>>> mult(n);

  for (std::size_t p = 0; p < n; ++p) {
    auto& lv = levels[p];
    auto& R = mult[p];
    lv.emplace_back(n);
    lv[0][p].push_back({});
    for (std::size_t l = 0;; ++l) {
      bool any = false;
      for (std::size_t q = 0; q < n && !any; ++q) any = !lv[l][q].empty();
      if (!any) break;
      if (l >= bound) {
        for (std::size_t q = 0; q < n; ++q)
          if (!lv[l][q].empty()) {
            c->nil_.ok = false;
            c->nil_.hom_finite = false;
            if (c->nil_.witness.empty())
              c->nil_.witness = "nonzero path of length " + std::to_string(l) + ": " +
                                detail::path_text(arrows, lv[l][q].front());
            break;
          }
        break;
      }
      lv.emplace_back(n);
      R.emplace_back(arrows.size());
      for (std::size_t q = 0; q < n; ++q) {
        struct Free {
          std::size_t a, b;
          Path path;
        };
        std::vector<Free> free;
        std::vector<std::size_t> block_start(arrows.size(), 0);
        for (auto a : arrows_into[q]) {
          block_start[a] = free.size();
          const auto& src_paths = lv[l][arrows[a].src];
          for (std::size_t b = 0; b < src_paths.size(); ++b) {
            Path path = src_paths[b];
            path.push_back(a);
            free.push_back({a, b, std::move(path)});
          }
        }
        if (free.empty()) {
          for (auto a : arrows_into[q]) R[l][a] = Matrix<F>(field, 0, 0);
          continue;
        }
        // Column order: descending path key, so pivots eliminate the largest paths.
        std::vector<std::size_t> order(free.size());
        for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
          return detail::path_less(arrows, free[y].path, free[x].path);
        });
        std::vector<std::size_t> col_of(free.size());
        for (std::size_t k = 0; k < order.size(); ++k) col_of[order[k]] = k;

        std::vector<Vec<F>> rows;
        for (auto ri : rel_into[q]) {
          const auto& rel = c->relations_[ri];
          const auto L = rel.terms.front().path.size();
          if (L > l + 1) continue;
          const auto start = l + 1 - L;
          const auto& us = lv[start][rel.src];
          for (std::size_t u = 0; u < us.size(); ++u) {
            Vec<F> row(free.size(), field.zero());
            for (const auto& t : rel.terms) {
              Vec<F> v = unit_vec(field, us.size(), u);
              for (std::size_t k = 0; k + 1 < L; ++k) v = R[start + k][t.path[k]].apply(v);
              const auto last = t.path.back();
              const auto coeff = field.from_rational(t.coeff);
              for (std::size_t b = 0; b < v.size(); ++b)
                if (!is_zero(v[b])) row[col_of[block_start[last] + b]] += coeff * v[b];
            }
            if (!is_zero_vec<F>(row)) rows.push_back(std::move(row));
          }
        }
        std::vector<bool> is_pivot(free.size(), false);
        std::vector<std::size_t> pivot_row(free.size(), 0);
        Matrix<F> red(field, 0, free.size());
        if (!rows.empty()) {
          auto e = rref(Matrix<F>::from_rows(field, free.size(), rows));
          for (std::size_t r = 0; r < e.pivots.size(); ++r) {
            is_pivot[e.pivots[r]] = true;
            pivot_row[e.pivots[r]] = r;
          }
          red = std::move(e.reduced);
        }
        // Basis: non-pivot columns in ascending key order.
        std::vector<std::size_t> basis_cols;
        for (std::size_t col = free.size(); col-- > 0;)
          if (!is_pivot[col]) basis_cols.push_back(col);
        std::vector<std::size_t> basis_pos(free.size(), 0);
        for (std::size_t k = 0; k < basis_cols.size(); ++k) {
          basis_pos[basis_cols[k]] = k;
          lv[l + 1][q].push_back(free[order[basis_cols[k]]].path);
        }
        for (auto a : arrows_into[q]) R[l][a] = Matrix<F>(field, basis_cols.size(), lv[l][arrows[a].src].size());
        for (std::size_t k = 0; k < free.size(); ++k) {
          const auto col = col_of[k];
          auto& M = R[l][free[k].a];
          if (!is_pivot[col]) {
            M(basis_pos[col], free[k].b) = field.one();
          } else {
            const auto r = pivot_row[col];
            for (auto bc : basis_cols)
              if (!is_zero(red(r, bc))) M(basis_pos[bc], free[k].b) = -red(r, bc);
          }
        }
      }
      for (std::size_t a = 0; a < arrows.size(); ++a)
        if (R[l][a].rows() == 0 && R[l][a].cols() == 0)
          R[l][a] = Matrix<F>(field, lv[l + 1][arrows[a].tgt].size(), lv[l][arrows[a].src].size());
    }
  }

  // Assemble hom bases ordered by (length, key); remember level offsets.
  c->homs_.assign(n * n, {});
  std::vector<std::vector<std::vector<std::size_t>>> offset(n);  // offset[p][l][q]
  std::size_t longest = 0;
  for (std::size_t p = 0; p < n; ++p) {
    offset[p].assign(levels[p].size(), std::vector<std::size_t>(n, 0));
    for (std::size_t l = 0; l < levels[p].size(); ++l)
      for (std::size_t q = 0; q < n; ++q) {
        auto& h = c->homs_[p * n + q];
        offset[p][l][q] = h.paths.size();
        for (const auto& path : levels[p][l][q]) {
          h.paths.push_back(path);
          h.lengths.push_back(l);
          longest = std::max(longest, l);
        }
      }
  }

  for (std::size_t p = 0; p < n; ++p) {
    const auto& R = mult[p];
    for (std::size_t q = 0; q < n; ++q) {
      const auto dpq = c->dim(p, q);
      if (dpq == 0) continue;
      for (std::size_t r = 0; r < n; ++r) {
        const auto dqr = c->dim(q, r), dpr = c->dim(p, r);
        if (dqr == 0 || dpr == 0) continue;
        std::vector<E> tab(dqr * dpq * dpr, field.zero());
        for (std::size_t j = 0; j < dpq; ++j) {
          const auto lj = c->length(p, q, j);
          const auto pos = j - offset[p][lj][q];
          for (std::size_t i = 0; i < dqr; ++i) {
            const auto& beta = c->path(q, r, i);
            Vec<F> v = unit_vec(field, levels[p][lj][q].size(), pos);
            std::size_t lev = lj;
            bool zero = false;
            for (auto a : beta) {
              if (lev >= R.size()) {
                zero = true;
                break;
              }
              v = R[lev][a].apply(v);
              ++lev;
              if (is_zero_vec<F>(v)) {
                zero = true;
                break;
              }
            }
            if (zero) continue;
            for (std::size_t k = 0; k < v.size(); ++k)
              if (!is_zero(v[k])) tab[(i * dpq + j) * dpr + offset[p][lev][r] + k] = v[k];
          }
        }
        c->tables_.emplace((p * n + q) * n + r, std::move(tab));
      }
    }
  }

  if (c->nil_.ok) {
    c->nil_.degree = longest + 1;
    for (std::size_t p = 0; p < n && c->nil_.ok; ++p) {
      if (!c->open_in_[p]) continue;
      for (std::size_t q = 0; q < n; ++q)
        if (c->open_out_[q] && c->dim(p, q) > 0) {
          c->nil_.ok = false;
          c->nil_.locally_bounded = false;
          c->nil_.witness = "nonzero morphism " + detail::path_text(arrows, c->path(p, q, c->dim(p, q) - 1)) +
                            " from " + c->labels_[p] + " runs across the whole window to " + c->labels_[q];
          break;
        }
    }
  }
  c->pres_ = std::move(pres);
  c->finish_common();
  return c;
}

template <class F>
std::shared_ptr<const KCategory<F>> KCategory<F>::product(const KCategory& Q, const KCategory& A) {
  std::shared_ptr<KCategory> c(new KCategory(Q.field()));
  const auto& field = Q.field();
  const auto nQ = Q.size(), nA = A.size();
  const auto aQ = Q.arrows().size(), aA = A.arrows().size();
  const auto n = nQ * nA;
  auto obj = [nA](std::size_t q, std::size_t v) { return q * nA + v; };
  auto qarrow = [nA](std::size_t a, std::size_t v) { return a * nA + v; };
  auto aarrow = [nA, aQ, aA](std::size_t q, std::size_t al) { return aQ * nA + q * aA + al; };

  c->labels_.resize(n);
  c->open_in_.assign(n, false);
  c->open_out_.assign(n, false);
  for (std::size_t q = 0; q < nQ; ++q)
    for (std::size_t v = 0; v < nA; ++v) {
      c->labels_[obj(q, v)] = nA == 1 ? Q.label(q) : Q.label(q) + "/" + A.label(v);
      c->open_in_[obj(q, v)] = Q.open_in(q);
      c->open_out_[obj(q, v)] = Q.open_out(q);
    }
  c->arrows_.resize(aQ * nA + nQ * aA);
  for (std::size_t a = 0; a < aQ; ++a)
    for (std::size_t v = 0; v < nA; ++v) {
      const auto& qa = Q.arrows()[a];
      c->arrows_[qarrow(a, v)] = {qa.name, nA == 1 ? qa.label : qa.label + "/" + A.label(v), obj(qa.src, v),
                                  obj(qa.tgt, v)};
    }
  for (std::size_t q = 0; q < nQ; ++q)
    for (std::size_t al = 0; al < aA; ++al) {
      const auto& aa = A.arrows()[al];
      c->arrows_[aarrow(q, al)] = {aa.name, aa.label + "@" + Q.label(q), obj(q, aa.src), obj(q, aa.tgt)};
    }
  for (const auto& r : Q.relations())
    for (std::size_t v = 0; v < nA; ++v) {
      RelationData rel{nA == 1 ? r.label : r.label + "/" + A.label(v), obj(r.src, v), obj(r.tgt, v), {}};
      for (const auto& t : r.terms) {
        PathTerm pt{t.coeff, {}};
        for (auto a : t.path) pt.path.push_back(qarrow(a, v));
        rel.terms.push_back(std::move(pt));
      }
      c->relations_.push_back(std::move(rel));
    }
  for (const auto& r : A.relations())
    for (std::size_t q = 0; q < nQ; ++q) {
      RelationData rel{r.label + "@" + Q.label(q), obj(q, r.src), obj(q, r.tgt), {}};
      for (const auto& t : r.terms) {
        PathTerm pt{t.coeff, {}};
        for (auto a : t.path) pt.path.push_back(aarrow(q, a));
        rel.terms.push_back(std::move(pt));
      }
      c->relations_.push_back(std::move(rel));
    }
  for (std::size_t a = 0; a < aQ; ++a)
    for (std::size_t al = 0; al < aA; ++al) {
      const auto& qa = Q.arrows()[a];
      const auto& aa = A.arrows()[al];
      RelationData rel{"comm(" + qa.label + "," + aa.label + ")", obj(qa.src, aa.src), obj(qa.tgt, aa.tgt), {}};
      rel.terms.push_back({mpq_class(1), {qarrow(a, aa.src), aarrow(qa.tgt, al)}});
      rel.terms.push_back({mpq_class(-1), {aarrow(qa.src, al), qarrow(a, aa.tgt)}});
      c->relations_.push_back(std::move(rel));
    }

  c->homs_.assign(n * n, {});
  for (std::size_t p = 0; p < nQ; ++p)
    for (std::size_t q = 0; q < nQ; ++q)
      for (std::size_t u = 0; u < nA; ++u)
        for (std::size_t v = 0; v < nA; ++v) {
          auto& h = c->homs_[obj(p, u) * n + obj(q, v)];
          for (std::size_t i = 0; i < Q.dim(p, q); ++i)
            for (std::size_t j = 0; j < A.dim(u, v); ++j) {
              Path path;
              for (auto a : Q.path(p, q, i)) path.push_back(qarrow(a, u));
              for (auto al : A.path(u, v, j)) path.push_back(aarrow(q, al));
              h.paths.push_back(std::move(path));
              h.lengths.push_back(Q.length(p, q, i) + A.length(u, v, j));
            }
        }

  for (std::size_t p = 0; p < nQ; ++p)
    for (std::size_t q = 0; q < nQ; ++q)
      for (std::size_t r = 0; r < nQ; ++r) {
        const auto* cq = Q.table(p, q, r);
        if (!cq) continue;
        const auto qpq = Q.dim(p, q), qpr = Q.dim(p, r), qqr = Q.dim(q, r);
        for (std::size_t u = 0; u < nA; ++u)
          for (std::size_t v = 0; v < nA; ++v)
            for (std::size_t w = 0; w < nA; ++w) {
              const auto* ca = A.table(u, v, w);
              if (!ca) continue;
              const auto apq = A.dim(u, v), apr = A.dim(u, w), aqr = A.dim(v, w);
              const auto dPQ = qpq * apq, dPR = qpr * apr, dQR = qqr * aqr;
              std::vector<E> tab(dQR * dPQ * dPR, field.zero());
              for (std::size_t i1 = 0; i1 < qqr; ++i1)
                for (std::size_t j1 = 0; j1 < qpq; ++j1)
                  for (std::size_t k1 = 0; k1 < qpr; ++k1) {
                    const auto& x = (*cq)[(i1 * qpq + j1) * qpr + k1];
                    if (is_zero(x)) continue;
                    for (std::size_t i2 = 0; i2 < aqr; ++i2)
                      for (std::size_t j2 = 0; j2 < apq; ++j2)
                        for (std::size_t k2 = 0; k2 < apr; ++k2) {
                          const auto& y = (*ca)[(i2 * apq + j2) * apr + k2];
                          if (is_zero(y)) continue;
                          const auto I = i1 * aqr + i2, J = j1 * apq + j2, K = k1 * apr + k2;
                          tab[(I * dPQ + J) * dPR + K] = x * y;
                        }
                  }
              c->tables_.emplace((obj(p, u) * n + obj(q, v)) * n + obj(r, w), std::move(tab));
            }
      }

  c->shape_ = Q.shape();
  c->nil_.degree = Q.nilpotence().degree + A.nilpotence().degree - 1;
  c->nil_.ok = Q.nilpotence().ok && A.nilpotence().ok;
  c->max_rel_ = std::max<std::size_t>({Q.max_relation_length(), A.max_relation_length(), 2});
  c->finish_common();
  return c;
}

}  // namespace qshape
