#pragma once

// Minimal projective resolutions, the homology functors
//   H^i_[q](X) = Ext^i_Q(S<q>, X),   H_i^[q](X) = Tor_i^Q(S{q}, X),
// the classes E and weq, Ext over Q,A-Mod and closed-form oracles for
// complexes and N-complexes.

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "qshape/qa.hpp"

namespace qshape {

/// Minimal projective resolution P_n -> ... -> P_0 -> M over a category C.
/// Layer n is free on generator objects gens(n); diff(n)[i][j] is the
/// component C(t_j, t_i) from generator j of layer n-1 to generator i of
/// layer n. Extension is lazy and not thread safe.
template <class F>
class Resolution {
 public:
  explicit Resolution(RepPtr<F> target) : target_(std::move(target)) {}

  const RepPtr<F>& target() const { return target_; }
  const KCategory<F>& cat() const { return target_->cat(); }
  std::size_t computed() const { return layers_.size(); }

  /// Realize layers 0..n. Layers below n must sit on out-complete objects.
  void ensure(std::size_t n) {
    while (layers_.size() <= n) step();
  }

  const std::vector<std::size_t>& gens(std::size_t n) const { return layers_.at(n).gens; }
  const std::vector<std::vector<Vec<F>>>& diff(std::size_t n) const { return layers_.at(n).diff; }
  const RepPtr<F>& layer(std::size_t n) const { return layers_.at(n).free; }
  /// P_n -> P_{n-1}, or the augmentation P_0 -> M.
  const RepMorphism<F>& down(std::size_t n) const { return layers_.at(n).down; }
  bool complete(std::size_t n) const { return layers_.at(n).complete; }
  /// Length if the resolution has terminated among the computed layers.
  std::optional<std::size_t> length() const {
    for (std::size_t n = 0; n < layers_.size(); ++n)
      if (layers_[n].gens.empty()) return n == 0 ? 0 : n - 1;
    return std::nullopt;
  }

 private:
  struct Layer {
    std::vector<std::size_t> gens;
    RepPtr<F> free;
    RepMorphism<F> down;
    std::vector<std::vector<Vec<F>>> diff;
    bool complete = true;
  };

  void step() {
    const auto& c = cat();
    Layer l;
    if (layers_.empty()) {
      auto cov = projective_cover(target_, false);
      l.gens = cov.gens;
      l.free = cov.object;
      l.down = cov.epi;
    } else {
      const auto& prev = layers_.back();
      if (!prev.complete) {
        for (auto t : prev.gens)
          if (!c.out_complete(t))
            throw WindowError("resolution layer " + std::to_string(layers_.size() - 1) + " has a generator at " +
                              c.label(t) + " whose projective is cut off; widen the window");
      }
      auto k = kernel(prev.down);
      auto cov = projective_cover(k.object, false);
      l.gens = cov.gens;
      l.free = cov.object;
      l.down = compose(k.inclusion, cov.epi);
      for (std::size_t i = 0; i < l.gens.size(); ++i) {
        const auto ti = l.gens[i];
        auto v = k.inclusion.comps[ti].apply(cov.elems[i]);
        std::vector<Vec<F>> row;
        std::size_t off = 0;
        for (auto tj : prev.gens) {
          const auto d = c.dim(tj, ti);
          row.emplace_back(v.begin() + off, v.begin() + off + d);
          off += d;
        }
        l.diff.push_back(std::move(row));
      }
    }
    for (auto t : l.gens)
      if (!c.out_complete(t)) l.complete = false;
    layers_.push_back(std::move(l));
  }

  RepPtr<F> target_;
  std::vector<Layer> layers_;
};

/// Homology of a three-term stretch In -> C -> Out at C.
template <class F>
class Subquotient {
 public:
  Subquotient(const F& field, std::size_t n, const Matrix<F>& in, const Matrix<F>& out)
      : Z_(out.rows() == 0 ? Matrix<F>::identity(field, n) : kernel_matrix(out)),
        quo_(field, Z_.cols(), image_in_cycles(field, in)) {}

  std::size_t dim() const { return quo_.dim(); }
  const Matrix<F>& cycles() const { return Z_; }
  /// Cycles representing the homology basis.
  Matrix<F> representatives() const { return Z_ * quo_.section(); }
  /// Class coordinates of a cycle.
  Vec<F> class_of(const Vec<F>& z) const {
    auto w = solve(Z_, z);
    if (!w) throw std::logic_error("class_of: vector is not a cycle");
    return quo_.projection().apply(*w);
  }
  /// Matrix of the map induced by a chain map m from this stretch to another.
  Matrix<F> induced(const Matrix<F>& m, const Subquotient& to) const {
    const auto& f = m.field();
    Matrix<F> out(f, to.dim(), dim());
    auto reps = representatives();
    for (std::size_t k = 0; k < dim(); ++k) {
      auto c = to.class_of(m.apply(reps.column(k)));
      for (std::size_t r = 0; r < c.size(); ++r) out(r, k) = c[r];
    }
    return out;
  }

 private:
  Matrix<F> image_in_cycles(const F& field, const Matrix<F>& in) const {
    Matrix<F> w(field, Z_.cols(), in.cols());
    for (std::size_t j = 0; j < in.cols(); ++j) {
      auto s = solve(Z_, in.column(j));
      if (!s) throw std::logic_error("subquotient: image is not inside the cycles");
      for (std::size_t i = 0; i < s->size(); ++i) w(i, j) = (*s)[i];
    }
    return w;
  }

  Matrix<F> Z_;
  Quotient<F> quo_;
};

/// A homology value with its A-module structure.
template <class F>
struct HomologyValue {
  std::size_t q = 0, i = 0;
  bool cohomological = true;
  RepPtr<F> module;  // over A
  std::size_t dim() const { return module->total_dim(); }
};

template <class F>
class Homology {
 public:
  explicit Homology(const QA<F>& qa) : qa_(qa), Qop_(qa.Q().opposite()) {}

  const QA<F>& qa() const { return qa_; }
  const KCategory<F>& Qop() const { return *Qop_; }

  Resolution<F>& cohom_resolution(std::size_t q) {
    auto it = cres_.find(q);
    if (it == cres_.end()) it = cres_.emplace(q, Resolution<F>(simple(qa_.Q_ptr(), q))).first;
    return it->second;
  }
  Resolution<F>& tor_resolution(std::size_t q) {
    auto it = tres_.find(q);
    if (it == tres_.end()) it = tres_.emplace(q, Resolution<F>(simple(Qop_, q))).first;
    return it->second;
  }

  HomologyValue<F> cohom(std::size_t q, std::size_t i, const Representation<F>& x) {
    return value(q, i, true, x);
  }
  HomologyValue<F> tor(std::size_t q, std::size_t i, const Representation<F>& x) { return value(q, i, false, x); }

  /// Per A-vertex matrices of the map induced by phi on H^i_[q] or H_i^[q].
  std::vector<Matrix<F>> induced(std::size_t q, std::size_t i, bool cohomological, const RepMorphism<F>& phi) {
    std::vector<Matrix<F>> out;
    for (std::size_t v = 0; v < qa_.nA(); ++v) {
      auto sx = stretch(q, i, cohomological, *phi.source, v);
      auto sy = stretch(q, i, cohomological, *phi.target, v);
      std::vector<Matrix<F>> blocks;
      for (auto t : term_gens(q, i, cohomological)) blocks.push_back(phi.comps[qa_.obj(t, v)]);
      out.push_back(sx.induced(Matrix<F>::block_diagonal(qa_.field(), blocks), sy));
    }
    return out;
  }

  /// Realized objects q where H^i_[q](X) (or H_i^[q](X)) can be nonzero:
  /// i radical steps into (or out of) supp X. Objects beyond the window are
  /// not considered, so predicates hold on the window only.
  std::vector<std::size_t> relevant(const Representation<F>& x, std::size_t i, bool cohomological) const {
    const auto& Q = qa_.Q();
    std::set<std::size_t> cur;
    for (auto q : qa_.q_support(x)) cur.insert(q);
    for (std::size_t k = 0; k < i; ++k) {
      std::set<std::size_t> next;
      for (auto r : cur) {
        for (std::size_t p = 0; p < Q.size(); ++p)
          if (cohomological ? Q.rad_dim(p, r) > 0 : Q.rad_dim(r, p) > 0) next.insert(p);
      }
      cur = std::move(next);
    }
    return {cur.begin(), cur.end()};
  }

  std::vector<HomologyValue<F>> all(std::size_t i, const Representation<F>& x, bool cohomological) {
    std::vector<HomologyValue<F>> out;
    for (auto q : relevant(x, i, cohomological)) out.push_back(value(q, i, cohomological, x));
    return out;
  }

  bool exact_by_cohom(const Representation<F>& x) {
    for (const auto& h : all(1, x, true))
      if (h.dim()) return false;
    return true;
  }
  bool exact_by_tor(const Representation<F>& x) {
    for (const auto& h : all(1, x, false))
      if (h.dim()) return false;
    return true;
  }
  bool is_exact(const Representation<F>& x) {
    const bool a = exact_by_cohom(x), b = exact_by_tor(x);
    if (a != b) throw std::logic_error("exactness via H^1 and via H_1 disagree");
    return a;
  }

  /// The first (i, q) where phi fails to induce an isomorphism, if any.
  std::optional<std::pair<std::size_t, std::size_t>> weq_failure(const RepMorphism<F>& phi) {
    for (std::size_t i = 1; i <= 2; ++i) {
      std::set<std::size_t> qs;
      for (auto q : relevant(*phi.source, i, true)) qs.insert(q);
      for (auto q : relevant(*phi.target, i, true)) qs.insert(q);
      for (auto q : qs)
        for (const auto& m : induced(q, i, true, phi))
          if (m.rows() != m.cols() || rank(m) != m.rows()) return std::make_pair(i, q);
    }
    return std::nullopt;
  }
  bool is_weq(const RepMorphism<F>& phi) { return !weq_failure(phi); }

 private:
  static RepPtr<F> simple(std::shared_ptr<const KCategory<F>> c, std::size_t q) {
    std::vector<std::size_t> dims(c->size(), 0);
    dims[q] = 1;
    std::vector<Matrix<F>> maps;
    for (const auto& ar : c->arrows()) maps.emplace_back(c->field(), dims[ar.tgt], dims[ar.src]);
    return std::make_shared<const Representation<F>>(c, dims, std::move(maps));
  }

  Resolution<F>& res(std::size_t q, bool cohomological) {
    return cohomological ? cohom_resolution(q) : tor_resolution(q);
  }

  const std::vector<std::size_t>& term_gens(std::size_t q, std::size_t n, bool cohomological) {
    auto& r = res(q, cohomological);
    r.ensure(n + 1);
    return r.gens(n);
  }

  /// X_v of a Q-morphism from t_j to t_i given as a resolution component.
  Matrix<F> act(const Representation<F>& x, bool cohomological, std::size_t tj, std::size_t ti, std::size_t v,
                const Vec<F>& g) const {
    if (cohomological) return qa_.eval_q(x, tj, ti, v, g);
    // g in Q^op(t_j, t_i) = Q(t_i, t_j): evaluate reversed paths from t_i.
    Matrix<F> m(qa_.field(), x.dim(qa_.obj(tj, v)), x.dim(qa_.obj(ti, v)));
    if (m.empty()) return m;
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (is_zero(g[k])) continue;
      auto p = Qop_->path(tj, ti, k);
      std::reverse(p.begin(), p.end());
      m += qa_.eval_q_path(x, ti, v, p).scaled(g[k]);
    }
    return m;
  }

  std::size_t term_dim(const Representation<F>& x, const std::vector<std::size_t>& gens, std::size_t v) const {
    std::size_t s = 0;
    for (auto t : gens) s += x.dim(qa_.obj(t, v));
    return s;
  }

  /// Map from term n-1 to term n (cohomological) or term n to term n-1.
  Matrix<F> differential(std::size_t q, std::size_t n, bool cohomological, const Representation<F>& x,
                         std::size_t v) {
    auto& r = res(q, cohomological);
    r.ensure(n);
    const auto& lo = r.gens(n - 1);
    const auto& hi = r.gens(n);
    const auto dlo = term_dim(x, lo, v), dhi = term_dim(x, hi, v);
    Matrix<F> m = cohomological ? Matrix<F>(qa_.field(), dhi, dlo) : Matrix<F>(qa_.field(), dlo, dhi);
    std::size_t ro = 0;
    for (std::size_t i = 0; i < hi.size(); ++i) {
      std::size_t co = 0;
      for (std::size_t j = 0; j < lo.size(); ++j) {
        auto b = act(x, cohomological, lo[j], hi[i], v, r.diff(n)[i][j]);
        if (cohomological)
          m.set_block(ro, co, b);
        else
          m.set_block(co, ro, b);
        co += x.dim(qa_.obj(lo[j], v));
      }
      ro += x.dim(qa_.obj(hi[i], v));
    }
    return m;
  }

  Subquotient<F> stretch(std::size_t q, std::size_t i, bool cohomological, const Representation<F>& x,
                         std::size_t v) {
    const auto& f = qa_.field();
    auto& r = res(q, cohomological);
    r.ensure(i + 1);
    const auto n = term_dim(x, r.gens(i), v);
    if (cohomological) {
      auto in = i == 0 ? Matrix<F>(f, n, 0) : differential(q, i, true, x, v);
      auto out = differential(q, i + 1, true, x, v);
      return Subquotient<F>(f, n, in, out);
    }
    auto in = differential(q, i + 1, false, x, v);
    auto out = i == 0 ? Matrix<F>(f, 0, n) : differential(q, i, false, x, v);
    return Subquotient<F>(f, n, in, out);
  }

  HomologyValue<F> value(std::size_t q, std::size_t i, bool cohomological, const Representation<F>& x) {
    const auto& A = qa_.A();
    const auto& f = qa_.field();
    std::vector<Subquotient<F>> parts;
    std::vector<std::size_t> dims;
    for (std::size_t v = 0; v < qa_.nA(); ++v) {
      parts.push_back(stretch(q, i, cohomological, x, v));
      dims.push_back(parts.back().dim());
    }
    const auto& gens = term_gens(q, i, cohomological);
    std::vector<Matrix<F>> maps;
    for (std::size_t al = 0; al < A.arrows().size(); ++al) {
      const auto& ar = A.arrows()[al];
      std::vector<Matrix<F>> blocks;
      for (auto t : gens) blocks.push_back(x.map(qa_.a_arrow(t, al)));
      maps.push_back(parts[ar.src].induced(Matrix<F>::block_diagonal(f, blocks), parts[ar.tgt]));
    }
    HomologyValue<F> h;
    h.q = q;
    h.i = i;
    h.cohomological = cohomological;
    h.module = std::make_shared<const Representation<F>>(qa_.A_ptr(), dims, std::move(maps));
    return h;
  }

  const QA<F>& qa_;
  std::shared_ptr<const KCategory<F>> Qop_;
  std::map<std::size_t, Resolution<F>> cres_, tres_;
};

/// dim Ext^i_{Q,A}(X, Y) from a minimal resolution of X over Q (x) A.
template <class F>
std::size_t ext_dim(Resolution<F>& r, std::size_t i, const Representation<F>& y) {
  const auto& f = y.field();
  r.ensure(i + 1);
  auto term = [&](std::size_t n) {
    std::size_t s = 0;
    for (auto t : r.gens(n)) s += y.dim(t);
    return s;
  };
  auto delta = [&](std::size_t n) {  // term n-1 -> term n
    const auto& lo = r.gens(n - 1);
    const auto& hi = r.gens(n);
    Matrix<F> m(f, term(n), term(n - 1));
    std::size_t ro = 0;
    for (std::size_t a = 0; a < hi.size(); ++a) {
      std::size_t co = 0;
      for (std::size_t b = 0; b < lo.size(); ++b) {
        m.set_block(ro, co, y.eval(lo[b], hi[a], r.diff(n)[a][b]));
        co += y.dim(lo[b]);
      }
      ro += y.dim(hi[a]);
    }
    return m;
  };
  const auto n = term(i);
  auto in = i == 0 ? Matrix<F>(f, n, 0) : delta(i);
  return Subquotient<F>(f, n, in, delta(i + 1)).dim();
}

template <class F>
std::size_t ext_qa(std::size_t i, RepPtr<F> x, const Representation<F>& y) {
  Resolution<F> r(std::move(x));
  return ext_dim(r, i, y);
}

// Closed forms on linear kinds.

namespace detail {

template <class F>
std::optional<std::size_t> at_degree(const KCategory<F>& Q, int d) {
  const auto& s = Q.shape();
  for (std::size_t p = 0; p < Q.size(); ++p)
    if (!s.coords[p].empty() && s.coords[p][0] == d) return p;
  return std::nullopt;
}

template <class F>
std::optional<std::size_t> arrow_out(const KCategory<F>& Q, std::size_t p) {
  for (std::size_t a = 0; a < Q.arrows().size(); ++a)
    if (Q.arrows()[a].src == p) return a;
  return std::nullopt;
}

/// Matrix of d^k : X_d -> X_{d-k} on A-vertex v; zero when the path leaves the window.
template <class F>
Matrix<F> d_power(const QA<F>& qa, const Representation<F>& x, int d, int k, std::size_t v) {
  const auto& Q = qa.Q();
  auto src = at_degree(Q, d), tgt = at_degree(Q, d - k);
  const auto rows = tgt ? x.dim(qa.obj(*tgt, v)) : 0, cols = src ? x.dim(qa.obj(*src, v)) : 0;
  if (!src || !tgt) return Matrix<F>(qa.field(), rows, cols);
  std::vector<std::size_t> path;
  auto p = *src;
  for (int s = 0; s < k; ++s) {
    auto a = arrow_out(Q, p);
    if (!a) return Matrix<F>(qa.field(), rows, cols);
    path.push_back(*a);
    p = Q.arrows()[*a].tgt;
  }
  return qa.eval_q_path(x, *src, v, path);
}

template <class F>
std::size_t dim_at_degree(const QA<F>& qa, const Representation<F>& x, int d, std::size_t v) {
  auto p = at_degree(qa.Q(), d);
  return p ? x.dim(qa.obj(*p, v)) : 0;
}

}  // namespace detail

/// jH_q(X) = Ker(X_q -> X_{q-j}) / Im(X_{q+N-j} -> X_q), summed over A-vertices.
template <class F>
std::size_t nch_oracle(const QA<F>& qa, const Representation<F>& x, int j, int q) {
  const auto& s = qa.Q().shape();
  if (!s.is_linear()) throw std::invalid_argument("nch_oracle needs a linear category");
  const int N = s.complex_order();
  if (j <= 0 || j >= N) throw std::invalid_argument("nch_oracle: j must satisfy 0 < j < " + std::to_string(N));
  std::size_t total = 0;
  for (std::size_t v = 0; v < qa.nA(); ++v) {
    const auto n = detail::dim_at_degree(qa, x, q, v);
    auto out = detail::d_power(qa, x, q, j, v);
    auto in = detail::d_power(qa, x, q + N - j, N - j, v);
    total += subquotient_dim(qa.field(), n, kernel_matrix(out).columns(), in.columns());
  }
  return total;
}

/// Classic homology H_j of a complex.
template <class F>
std::size_t ch_oracle(const QA<F>& qa, const Representation<F>& x, int j) {
  if (!qa.Q().shape().is_linear() || qa.Q().shape().complex_order() != 2)
    throw std::invalid_argument("ch_oracle needs the category of complexes");
  return nch_oracle(qa, x, 1, j);
}

/// Homology predicted by the closed forms for complexes and N-complexes.
/// The Tor side uses j = 1 in odd and j = N-1 in even degrees.
template <class F>
std::size_t predicted(const QA<F>& qa, const Representation<F>& x, int q, int i, bool cohomological) {
  const int N = qa.Q().shape().complex_order();
  if (cohomological) {
    if (i % 2) return nch_oracle(qa, x, N - 1, q - 1 - (i - 1) / 2 * N);
    return nch_oracle(qa, x, 1, q - i / 2 * N);
  }
  if (i % 2) return nch_oracle(qa, x, 1, q + 1 + (i - 1) / 2 * N);
  return nch_oracle(qa, x, N - 1, q + i / 2 * N);
}

/// The Tor side mirrored from the cohomological one: j = N-1 in odd and
/// j = 1 in even degrees. Agrees with predicted() for N = 2 only.
template <class F>
std::size_t predicted_swapped(const QA<F>& qa, const Representation<F>& x, int q, int i, bool cohomological) {
  const int N = qa.Q().shape().complex_order();
  const int sg = cohomological ? -1 : 1;
  if (i % 2) return nch_oracle(qa, x, N - 1, q + sg * (1 + (i - 1) / 2 * N));
  return nch_oracle(qa, x, 1, q + sg * (i / 2 * N));
}

}  // namespace qshape
