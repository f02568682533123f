#pragma once

// JSON encodings. Matrices: {"rows","cols","field","entries"} with entries as
// rational strings in row-major order.

#include <string>

#include <json.hpp>

#include "qshape/matrix.hpp"

namespace qshape {

using Json = nlohmann::ordered_json;

template <class F>
Json matrix_to_json(const Matrix<F>& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["field"] = m.field().name();
  Json e = Json::array();
  for (const auto& x : m.entries()) e.push_back(m.field().format(x));
  j["entries"] = std::move(e);
  return j;
}

template <class F>
Matrix<F> matrix_from_json(const F& field, const Json& j) {
  if (j.at("field").get<std::string>() != field.name())
    throw std::invalid_argument("matrix field " + j.at("field").get<std::string>() + " does not match " + field.name());
  const auto rows = j.at("rows").get<std::size_t>(), cols = j.at("cols").get<std::size_t>();
  const auto& e = j.at("entries");
  if (e.size() != rows * cols) throw DimensionError("entries length differs from rows*cols");
  Matrix<F> m(field, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = field.parse(e[i * cols + k].get<std::string>());
  return m;
}

}  // namespace qshape
