#pragma once

// Finite-dimensional representations of a realized k-linear category C and
// their morphisms: evaluation on morphisms of C, Hom spaces, kernels,
// cokernels, sums, radicals, projective covers and injectivity tests.
// A representation assigns a vector space to every object and a matrix to
// every arrow; the value of a basis morphism is the product along its path.

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qshape/category.hpp"

namespace qshape {

template <class F>
class Representation {
 public:
  using Cat = KCategory<F>;
  using CatPtr = std::shared_ptr<const Cat>;

  Representation() = default;
  Representation(CatPtr cat, std::vector<std::size_t> dims, std::vector<Matrix<F>> maps)
      : cat_(std::move(cat)), dims_(std::move(dims)), maps_(std::move(maps)) {
    if (dims_.size() != cat_->size()) throw DimensionError("representation: wrong number of objects");
    if (maps_.size() != cat_->arrows().size()) throw DimensionError("representation: wrong number of arrows");
    for (std::size_t a = 0; a < maps_.size(); ++a) {
      const auto& ar = cat_->arrows()[a];
      if (maps_[a].rows() != dims_[ar.tgt] || maps_[a].cols() != dims_[ar.src])
        throw DimensionError("representation: matrix for " + ar.label + " has shape " +
                             std::to_string(maps_[a].rows()) + "x" + std::to_string(maps_[a].cols()) +
                             ", expected " + std::to_string(dims_[ar.tgt]) + "x" + std::to_string(dims_[ar.src]));
    }
  }

  static Representation zero(CatPtr cat) {
    std::vector<std::size_t> dims(cat->size(), 0);
    std::vector<Matrix<F>> maps;
    for (std::size_t a = 0; a < cat->arrows().size(); ++a) maps.emplace_back(cat->field(), 0, 0);
    return Representation(std::move(cat), std::move(dims), std::move(maps));
  }

  const Cat& cat() const { return *cat_; }
  const CatPtr& cat_ptr() const { return cat_; }
  const F& field() const { return cat_->field(); }
  std::size_t dim(std::size_t p) const { return dims_[p]; }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t total_dim() const {
    std::size_t s = 0;
    for (auto d : dims_) s += d;
    return s;
  }
  bool is_zero() const { return total_dim() == 0; }
  const Matrix<F>& map(std::size_t a) const { return maps_[a]; }
  const std::vector<Matrix<F>>& maps() const { return maps_; }
  std::vector<std::size_t> support() const {
    std::vector<std::size_t> s;
    for (std::size_t p = 0; p < dims_.size(); ++p)
      if (dims_[p] > 0) s.push_back(p);
    return s;
  }

  Matrix<F> eval_path(std::size_t from, const std::vector<std::size_t>& path) const {
    Matrix<F> m = Matrix<F>::identity(field(), dims_[from]);
    for (auto a : path) {
      m = maps_[a] * m;
      if (m.empty()) return Matrix<F>(field(), dims_[cat_->arrows()[path.back()].tgt], dims_[from]);
    }
    return m;
  }

  /// X(f) for basis element i of C(p,q).
  Matrix<F> eval(std::size_t p, std::size_t q, std::size_t i) const { return eval_path(p, cat_->path(p, q, i)); }

  /// X(f) for f in C(p,q) given by coordinates.
  Matrix<F> eval(std::size_t p, std::size_t q, const Vec<F>& f) const {
    Matrix<F> m(field(), dims_[q], dims_[p]);
    if (m.empty()) return m;
    for (std::size_t i = 0; i < f.size(); ++i)
      if (!qshape::is_zero(f[i])) m += eval(p, q, i).scaled(f[i]);
    return m;
  }

  /// Residual of the first violated relation, if any.
  std::optional<std::string> relation_error() const {
    for (const auto& rel : cat_->relations()) {
      Matrix<F> m(field(), dims_[rel.tgt], dims_[rel.src]);
      if (m.empty()) continue;
      for (const auto& t : rel.terms) m += eval_path(rel.src, t.path).scaled(field().from_rational(t.coeff));
      if (!m.is_zero()) {
        std::string res = "[";
        for (std::size_t i = 0; i < m.rows(); ++i) {
          res += i ? ",[" : "[";
          for (std::size_t j = 0; j < m.cols(); ++j) res += (j ? "," : "") + field().format(m(i, j));
          res += "]";
        }
        return "relation " + rel.label + " violated, residual " + res + "]";
      }
    }
    return std::nullopt;
  }

  friend bool operator==(const Representation& a, const Representation& b) {
    return a.cat_ == b.cat_ && a.dims_ == b.dims_ && a.maps_ == b.maps_;
  }

 private:
  CatPtr cat_;
  std::vector<std::size_t> dims_;
  std::vector<Matrix<F>> maps_;
};

template <class F>
using RepPtr = std::shared_ptr<const Representation<F>>;

struct RelationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Build and verify a representation.
template <class F>
RepPtr<F> make_rep(std::shared_ptr<const KCategory<F>> cat, std::vector<std::size_t> dims,
                   std::vector<Matrix<F>> maps) {
  auto r = std::make_shared<Representation<F>>(std::move(cat), std::move(dims), std::move(maps));
  if (auto err = r->relation_error()) throw RelationError(*err);
  return r;
}

template <class F>
struct RepMorphism {
  RepPtr<F> source, target;
  std::vector<Matrix<F>> comps;

  const F& field() const { return source->field(); }
  const KCategory<F>& cat() const { return source->cat(); }

  /// Naturality failure, if any.
  std::optional<std::string> naturality_error() const {
    const auto& c = source->cat();
    if (comps.size() != c.size()) return "wrong number of components";
    for (std::size_t p = 0; p < c.size(); ++p)
      if (comps[p].rows() != target->dim(p) || comps[p].cols() != source->dim(p))
        return "component at " + c.label(p) + " has the wrong shape";
    for (std::size_t a = 0; a < c.arrows().size(); ++a) {
      const auto& ar = c.arrows()[a];
      if (target->dim(ar.tgt) == 0 || source->dim(ar.src) == 0) continue;
      if (comps[ar.tgt] * source->map(a) != target->map(a) * comps[ar.src])
        return "square at arrow " + ar.label + " does not commute";
    }
    return std::nullopt;
  }

  bool is_zero() const {
    for (const auto& m : comps)
      if (!m.is_zero()) return false;
    return true;
  }
  bool is_mono() const {
    for (std::size_t p = 0; p < comps.size(); ++p)
      if (rank(comps[p]) != source->dim(p)) return false;
    return true;
  }
  bool is_epi() const {
    for (std::size_t p = 0; p < comps.size(); ++p)
      if (rank(comps[p]) != target->dim(p)) return false;
    return true;
  }
  bool is_iso() const {
    for (std::size_t p = 0; p < comps.size(); ++p)
      if (source->dim(p) != target->dim(p) || rank(comps[p]) != source->dim(p)) return false;
    return true;
  }
};

template <class F>
RepMorphism<F> zero_morphism(RepPtr<F> x, RepPtr<F> y) {
  RepMorphism<F> m{x, y, {}};
  for (std::size_t p = 0; p < x->cat().size(); ++p) m.comps.emplace_back(x->field(), y->dim(p), x->dim(p));
  return m;
}

template <class F>
RepMorphism<F> identity_morphism(RepPtr<F> x) {
  RepMorphism<F> m{x, x, {}};
  for (std::size_t p = 0; p < x->cat().size(); ++p) m.comps.push_back(Matrix<F>::identity(x->field(), x->dim(p)));
  return m;
}

/// g o f.
template <class F>
RepMorphism<F> compose(const RepMorphism<F>& g, const RepMorphism<F>& f) {
  RepMorphism<F> m{f.source, g.target, {}};
  for (std::size_t p = 0; p < f.comps.size(); ++p) m.comps.push_back(g.comps[p] * f.comps[p]);
  return m;
}

template <class F>
RepMorphism<F> operator+(const RepMorphism<F>& a, const RepMorphism<F>& b) {
  RepMorphism<F> m{a.source, a.target, {}};
  for (std::size_t p = 0; p < a.comps.size(); ++p) m.comps.push_back(a.comps[p] + b.comps[p]);
  return m;
}

template <class F>
RepMorphism<F> scaled(const RepMorphism<F>& a, const Elem<F>& s) {
  RepMorphism<F> m{a.source, a.target, {}};
  for (const auto& c : a.comps) m.comps.push_back(c.scaled(s));
  return m;
}

template <class F>
RepMorphism<F> operator-(const RepMorphism<F>& a) {
  return scaled(a, -a.field().one());
}

template <class F>
RepMorphism<F> operator-(const RepMorphism<F>& a, const RepMorphism<F>& b) {
  return a + (-b);
}

/// Flattened coordinates (all components, row-major, object by object).
template <class F>
Vec<F> flatten(const RepMorphism<F>& m) {
  Vec<F> v;
  for (const auto& c : m.comps) v.insert(v.end(), c.entries().begin(), c.entries().end());
  return v;
}

template <class F>
RepMorphism<F> unflatten(RepPtr<F> x, RepPtr<F> y, const Vec<F>& v) {
  RepMorphism<F> m = zero_morphism(x, y);
  std::size_t k = 0;
  for (auto& c : m.comps)
    for (std::size_t i = 0; i < c.rows(); ++i)
      for (std::size_t j = 0; j < c.cols(); ++j) c(i, j) = v[k++];
  return m;
}

/// Basis of Hom(X, Y): kernel of the naturality system.
template <class F>
std::vector<RepMorphism<F>> hom_space(RepPtr<F> x, RepPtr<F> y) {
  const auto& c = x->cat();
  const auto& field = x->field();
  const auto n = c.size();
  std::vector<std::size_t> off(n + 1, 0);
  for (std::size_t p = 0; p < n; ++p) off[p + 1] = off[p] + y->dim(p) * x->dim(p);
  const auto unknowns = off[n];
  if (unknowns == 0) return {};
  std::vector<Vec<F>> rows;
  for (std::size_t a = 0; a < c.arrows().size(); ++a) {
    const auto& ar = c.arrows()[a];
    const auto s = ar.src, t = ar.tgt;
    const auto xs = x->dim(s), xt = x->dim(t), ys = y->dim(s), yt = y->dim(t);
    if (xs == 0 || yt == 0) continue;
    const auto& X = x->map(a);  // xt x xs
    const auto& Y = y->map(a);  // yt x ys
    // (phi_t X - Y phi_s)(i,j) = 0 for i < yt, j < xs.
    for (std::size_t i = 0; i < yt; ++i)
      for (std::size_t j = 0; j < xs; ++j) {
        Vec<F> row(unknowns, field.zero());
        for (std::size_t k = 0; k < xt; ++k)
          if (!is_zero(X(k, j))) row[off[t] + i * xt + k] += X(k, j);
        for (std::size_t k = 0; k < ys; ++k)
          if (!is_zero(Y(i, k))) row[off[s] + k * xs + j] -= Y(i, k);
        if (!is_zero_vec<F>(row)) rows.push_back(std::move(row));
      }
  }
  std::vector<Vec<F>> ker;
  if (rows.empty()) {
    for (std::size_t k = 0; k < unknowns; ++k) ker.push_back(unit_vec(field, unknowns, k));
  } else {
    ker = kernel_basis(Matrix<F>::from_rows(field, unknowns, rows));
  }
  std::vector<RepMorphism<F>> out;
  for (const auto& v : ker) out.push_back(unflatten(x, y, v));
  return out;
}

template <class F>
struct KernelData {
  RepPtr<F> object;
  RepMorphism<F> inclusion;
};

template <class F>
KernelData<F> kernel(const RepMorphism<F>& f) {
  const auto& c = f.cat();
  const auto& field = f.field();
  std::vector<Matrix<F>> basis;
  std::vector<std::size_t> dims;
  for (std::size_t p = 0; p < c.size(); ++p) {
    basis.push_back(f.target->dim(p) == 0 ? Matrix<F>::identity(field, f.source->dim(p)) : kernel_matrix(f.comps[p]));
    dims.push_back(basis.back().cols());
  }
  std::vector<Matrix<F>> maps;
  for (std::size_t a = 0; a < c.arrows().size(); ++a) {
    const auto& ar = c.arrows()[a];
    auto m = solve_matrix(basis[ar.tgt], f.source->map(a) * basis[ar.src]);
    if (!m) throw std::logic_error("kernel: subspace not stable under " + ar.label);
    maps.push_back(std::move(*m));
  }
  auto k = std::make_shared<const Representation<F>>(f.source->cat_ptr(), dims, std::move(maps));
  return {k, RepMorphism<F>{k, f.source, basis}};
}

template <class F>
struct CokernelData {
  RepPtr<F> object;
  RepMorphism<F> projection;
  std::vector<Matrix<F>> section;  // objectwise right inverses of the projection
};

/// Quotient of Y by the subrepresentation spanned by the given columns.
template <class F>
CokernelData<F> quotient_by(RepPtr<F> y, const std::vector<Matrix<F>>& sub) {
  const auto& c = y->cat();
  const auto& field = y->field();
  std::vector<Quotient<F>> qs;
  std::vector<std::size_t> dims;
  for (std::size_t p = 0; p < c.size(); ++p) {
    qs.emplace_back(field, y->dim(p), sub[p]);
    dims.push_back(qs.back().dim());
  }
  std::vector<Matrix<F>> maps;
  for (std::size_t a = 0; a < c.arrows().size(); ++a) {
    const auto& ar = c.arrows()[a];
    maps.push_back(qs[ar.tgt].projection() * y->map(a) * qs[ar.src].section());
  }
  auto q = std::make_shared<const Representation<F>>(y->cat_ptr(), dims, std::move(maps));
  CokernelData<F> out{q, RepMorphism<F>{y, q, {}}, {}};
  for (const auto& qq : qs) {
    out.projection.comps.push_back(qq.projection());
    out.section.push_back(qq.section());
  }
  return out;
}

template <class F>
CokernelData<F> cokernel(const RepMorphism<F>& f) {
  return quotient_by(f.target, f.comps);
}

template <class F>
KernelData<F> image(const RepMorphism<F>& f) {
  const auto& c = f.cat();
  std::vector<Matrix<F>> basis;
  std::vector<std::size_t> dims;
  for (std::size_t p = 0; p < c.size(); ++p) {
    basis.push_back(f.comps[p].cols() == 0 ? Matrix<F>(f.field(), f.target->dim(p), 0) : column_space(f.comps[p]));
    dims.push_back(basis.back().cols());
  }
  std::vector<Matrix<F>> maps;
  for (std::size_t a = 0; a < c.arrows().size(); ++a) {
    const auto& ar = c.arrows()[a];
    auto m = solve_matrix(basis[ar.tgt], f.target->map(a) * basis[ar.src]);
    if (!m) throw std::logic_error("image: subspace not stable");
    maps.push_back(std::move(*m));
  }
  auto im = std::make_shared<const Representation<F>>(f.source->cat_ptr(), dims, std::move(maps));
  return {im, RepMorphism<F>{im, f.target, basis}};
}

template <class F>
struct SumData {
  RepPtr<F> object;
  std::vector<RepMorphism<F>> injections, projections;
};

template <class F>
SumData<F> direct_sum(const std::vector<RepPtr<F>>& parts, std::shared_ptr<const KCategory<F>> cat = nullptr) {
  if (!cat) cat = parts.at(0)->cat_ptr();
  const auto& field = cat->field();
  const auto n = cat->size();
  std::vector<std::size_t> dims(n, 0);
  for (const auto& x : parts)
    for (std::size_t p = 0; p < n; ++p) dims[p] += x->dim(p);
  std::vector<Matrix<F>> maps;
  for (std::size_t a = 0; a < cat->arrows().size(); ++a) {
    std::vector<Matrix<F>> blocks;
    for (const auto& x : parts) blocks.push_back(x->map(a));
    maps.push_back(Matrix<F>::block_diagonal(field, blocks));
    const auto& ar = cat->arrows()[a];
    if (maps.back().rows() != dims[ar.tgt] || maps.back().cols() != dims[ar.src])
      maps.back() = Matrix<F>(field, dims[ar.tgt], dims[ar.src]);
  }
  auto s = std::make_shared<const Representation<F>>(cat, dims, std::move(maps));
  SumData<F> out{s, {}, {}};
  std::vector<std::size_t> off(n, 0);
  for (const auto& x : parts) {
    RepMorphism<F> inj{x, s, {}}, proj{s, x, {}};
    for (std::size_t p = 0; p < n; ++p) {
      Matrix<F> i(field, dims[p], x->dim(p));
      for (std::size_t k = 0; k < x->dim(p); ++k) i(off[p] + k, k) = field.one();
      proj.comps.push_back(i.transpose());
      inj.comps.push_back(std::move(i));
      off[p] += x->dim(p);
    }
    out.injections.push_back(std::move(inj));
    out.projections.push_back(std::move(proj));
  }
  return out;
}

/// (f_1, ..., f_k): X -> Y_1 + ... + Y_k.
template <class F>
RepMorphism<F> column_morphism(RepPtr<F> x, const SumData<F>& sum, const std::vector<RepMorphism<F>>& fs) {
  RepMorphism<F> m = zero_morphism(x, sum.object);
  for (std::size_t k = 0; k < fs.size(); ++k) m = m + compose(sum.injections[k], fs[k]);
  return m;
}

/// [g_1 ... g_k]: X_1 + ... + X_k -> Y.
template <class F>
RepMorphism<F> row_morphism(const SumData<F>& sum, RepPtr<F> y, const std::vector<RepMorphism<F>>& gs) {
  RepMorphism<F> m = zero_morphism(sum.object, y);
  for (std::size_t k = 0; k < gs.size(); ++k) m = m + compose(gs[k], sum.projections[k]);
  return m;
}

// --- radical, top, socle, projectives -------------------------------------

/// Columns spanning rad X at p: the images of all arrows into p.
template <class F>
Matrix<F> radical_span(const Representation<F>& x, std::size_t p) {
  std::vector<Matrix<F>> parts;
  const auto& c = x.cat();
  for (std::size_t a = 0; a < c.arrows().size(); ++a)
    if (c.arrows()[a].tgt == p) parts.push_back(x.map(a));
  if (parts.empty()) return Matrix<F>(x.field(), x.dim(p), 0);
  return Matrix<F>::hstack(x.field(), x.dim(p), parts);
}

/// Vectors in X(p) projecting to a basis of the top X(p)/rad X(p).
template <class F>
Matrix<F> top_basis(const Representation<F>& x, std::size_t p) {
  Quotient<F> q(x.field(), x.dim(p), radical_span(x, p));
  return q.section();
}

/// Basis of soc X(p): vectors killed by every arrow out of p.
template <class F>
Matrix<F> socle_basis(const Representation<F>& x, std::size_t p) {
  std::vector<Matrix<F>> parts;
  const auto& c = x.cat();
  for (std::size_t a = 0; a < c.arrows().size(); ++a)
    if (c.arrows()[a].src == p) parts.push_back(x.map(a));
  if (parts.empty() || x.dim(p) == 0) return Matrix<F>::identity(x.field(), x.dim(p));
  std::size_t rows = 0;
  for (const auto& m : parts) rows += m.rows();
  if (rows == 0) return Matrix<F>::identity(x.field(), x.dim(p));
  return kernel_matrix(Matrix<F>::vstack(x.field(), x.dim(p), parts));
}

/// The representable C(t, -).
template <class F>
RepPtr<F> representable(std::shared_ptr<const KCategory<F>> cat, std::size_t t) {
  const auto n = cat->size();
  const auto& field = cat->field();
  std::vector<std::size_t> dims(n);
  for (std::size_t p = 0; p < n; ++p) dims[p] = cat->dim(t, p);
  std::vector<Matrix<F>> maps;
  for (std::size_t a = 0; a < cat->arrows().size(); ++a) {
    const auto& ar = cat->arrows()[a];
    Matrix<F> m(field, dims[ar.tgt], dims[ar.src]);
    const auto el = cat->arrow_element(a);
    for (std::size_t j = 0; j < dims[ar.src]; ++j) {
      auto v = cat->compose(t, ar.src, ar.tgt, el, unit_vec(field, dims[ar.src], j));
      for (std::size_t i = 0; i < v.size(); ++i) m(i, j) = v[i];
    }
    maps.push_back(std::move(m));
  }
  return std::make_shared<const Representation<F>>(cat, dims, std::move(maps));
}

/// Direct sum of representables, one per generator object, in order.
template <class F>
RepPtr<F> free_rep(std::shared_ptr<const KCategory<F>> cat, const std::vector<std::size_t>& gens) {
  if (gens.empty()) return std::make_shared<const Representation<F>>(Representation<F>::zero(cat));
  std::vector<RepPtr<F>> parts;
  for (auto t : gens) parts.push_back(representable(cat, t));
  return direct_sum(parts, cat).object;
}

/// The morphism free_rep(gens) -> X sending generator j to x_j in X(t_j).
template <class F>
RepMorphism<F> from_generators(RepPtr<F> free, const std::vector<std::size_t>& gens, RepPtr<F> x,
                               const std::vector<Vec<F>>& elems) {
  const auto& c = x->cat();
  const auto& field = x->field();
  RepMorphism<F> m = zero_morphism(free, x);
  for (std::size_t p = 0; p < c.size(); ++p) {
    if (x->dim(p) == 0) continue;
    std::size_t col = 0;
    for (std::size_t j = 0; j < gens.size(); ++j) {
      const auto t = gens[j];
      for (std::size_t f = 0; f < c.dim(t, p); ++f, ++col) {
        auto v = x->eval(t, p, f).apply(elems[j]);
        for (std::size_t i = 0; i < v.size(); ++i) m.comps[p](i, col) = v[i];
      }
    }
    (void)field;
  }
  return m;
}

template <class F>
struct CoverData {
  std::vector<std::size_t> gens;  // generator objects
  std::vector<Vec<F>> elems;      // generator images
  RepPtr<F> object;
  RepMorphism<F> epi;
};

/// Projective cover of X: one generator per top basis vector, objects ascending.
template <class F>
CoverData<F> projective_cover(RepPtr<F> x, bool require_complete = true) {
  const auto& c = x->cat();
  CoverData<F> out;
  for (std::size_t p = 0; p < c.size(); ++p) {
    if (x->dim(p) == 0) continue;
    auto tb = top_basis(*x, p);
    if (tb.cols() > 0 && require_complete && !c.out_complete(p))
      throw WindowError("projective at " + c.label(p) + " is cut off by the window; pad the window below it");
    for (std::size_t j = 0; j < tb.cols(); ++j) {
      out.gens.push_back(p);
      out.elems.push_back(tb.column(j));
    }
  }
  out.object = free_rep(x->cat_ptr(), out.gens);
  out.epi = from_generators(out.object, out.gens, x, out.elems);
  return out;
}

/// X is projective iff it has the dimension of its projective cover.
template <class F>
bool is_projective(RepPtr<F> x) {
  const auto& c = x->cat();
  std::size_t cover = 0;
  for (std::size_t p = 0; p < c.size(); ++p) {
    if (x->dim(p) == 0) continue;
    const auto t = top_basis(*x, p).cols();
    if (t == 0) continue;
    if (!c.out_complete(p)) throw WindowError("projectivity test at " + c.label(p) + " needs a wider window");
    for (std::size_t q = 0; q < c.size(); ++q) cover += t * c.dim(p, q);
  }
  return cover == x->total_dim();
}

/// X is injective iff it has the dimension of its injective envelope.
template <class F>
bool is_injective(RepPtr<F> x) {
  const auto& c = x->cat();
  std::size_t env = 0;
  for (std::size_t p = 0; p < c.size(); ++p) {
    if (x->dim(p) == 0) continue;
    const auto s = socle_basis(*x, p).cols();
    if (s == 0) continue;
    if (!c.in_complete(p)) throw WindowError("injectivity test at " + c.label(p) + " needs a wider window");
    for (std::size_t q = 0; q < c.size(); ++q) env += s * c.dim(q, p);
  }
  return env == x->total_dim();
}

/// Search an isomorphism X -> Y among Hom(X, Y): basis elements first, then
/// seeded random combinations.
template <class F>
std::optional<RepMorphism<F>> find_isomorphism(RepPtr<F> x, RepPtr<F> y, unsigned seed = 7, int tries = 64) {
  if (x->dims() != y->dims()) return std::nullopt;
  if (x->total_dim() == 0) return zero_morphism(x, y);
  auto basis = hom_space(x, y);
  if (basis.empty()) return std::nullopt;
  for (const auto& b : basis)
    if (b.is_iso()) return b;
  std::mt19937_64 rng(seed);
  const auto& field = x->field();
  for (int t = 0; t < tries; ++t) {
    RepMorphism<F> m = zero_morphism(x, y);
    for (const auto& b : basis) m = m + scaled(b, field.random(rng));
    if (m.is_iso()) return m;
  }
  return std::nullopt;
}

}  // namespace qshape
