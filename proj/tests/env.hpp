#pragma once

// A linear or cyclic category on a window with its Frobenius structure.

#include "oracles.hpp"
#include "qshape/stable.hpp"

namespace qshape::testing {

template <class F>
struct Env {
  std::shared_ptr<const KCategory<F>> Q;
  QA<F> qa;
  Frobenius<F> fr;
  Env(const F& f, const QuiverSpec& s, int lo, int hi, bool dual = false)
      : Q(build_category(f, s, lo, hi)),
        qa(dual ? QA<F>(Q, build_category(f, dual_numbers())) : QA<F>::over_field(Q)),
        fr(qa, std::get<SerreData<F>>(find_serre(*Q))) {}
  Env(const Env&) = delete;
  std::size_t at(int d) const { return *Q->find(std::to_string(d)); }
  int deg(std::size_t p) const { return Q->shape().coords[p][0]; }
  RepPtr<F> stalk(int d) const { return qa.stalk(at(d)); }
  RepPtr<F> stalk(int d, RepPtr<F> M) const { return qa.stalk(at(d), M); }
  RepPtr<F> proj(int d) const { return qa.proj_rep(at(d), qa.regular_module()); }
  RepPtr<F> simple_A() const {
    auto A = qa.regular_module();
    return quotient_by(A, {radical_span(*A, 0)}).object;
  }
  /// M in degrees top, ..., top-len+1 with identity maps.
  RepPtr<F> interval(int top, int len, RepPtr<F> M = nullptr) const {
    if (!M) M = qa.vector_space(1);
    std::vector<RepPtr<F>> values;
    for (std::size_t p = 0; p < Q->size(); ++p)
      values.push_back(deg(p) <= top && deg(p) > top - len ? M : qa.zero_module());
    std::vector<std::vector<Matrix<F>>> maps;
    for (const auto& ar : Q->arrows()) {
      std::vector<Matrix<F>> ms;
      for (std::size_t v = 0; v < qa.nA(); ++v) {
        const auto r = values[ar.tgt]->dim(v), c = values[ar.src]->dim(v);
        ms.push_back(r && c ? Matrix<F>::identity(Q->field(), r) : Matrix<F>(Q->field(), r, c));
      }
      maps.push_back(ms);
    }
    return qa.assemble(values, maps);
  }
  std::vector<std::size_t> dims_by_degree(const Representation<F>& x) const {
    std::vector<std::size_t> d;
    for (std::size_t p = 0; p < Q->size(); ++p) d.push_back(qa.dim_at(x, p));
    return d;
  }
  /// P' with P'_d = P_{d-1} and differential -d.
  RepPtr<F> shift(const Representation<F>& x) const {
    std::vector<RepPtr<F>> values;
    for (std::size_t p = 0; p < Q->size(); ++p) {
      auto below = Q->find(std::to_string(deg(p) - 1));
      values.push_back(below ? qa.value(x, *below) : qa.zero_module());
    }
    std::vector<std::vector<Matrix<F>>> maps;
    for (const auto& ar : Q->arrows()) {
      auto s = Q->find(std::to_string(deg(ar.src) - 1));
      std::vector<Matrix<F>> ms;
      for (std::size_t v = 0; v < qa.nA(); ++v) {
        const auto r = values[ar.tgt]->dim(v), c = values[ar.src]->dim(v);
        std::optional<std::size_t> a;
        if (s)
          for (std::size_t k = 0; k < Q->arrows().size(); ++k)
            if (Q->arrows()[k].src == *s) a = k;
        ms.push_back(a && r && c ? -x.map(qa.q_arrow(*a, v)) : Matrix<F>(Q->field(), r, c));
      }
      maps.push_back(ms);
    }
    return qa.assemble(values, maps);
  }
};

}  // namespace qshape::testing
