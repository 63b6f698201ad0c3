#include "emotikon/common.hpp"

#include <algorithm>
#include <cmath>

namespace emotikon {

std::string_view to_string(Label label) { return label == Label::Fake ? "fake" : "real"; }

Label parse_label(std::string_view text) {
  if (text == "fake") return Label::Fake;
  if (text == "real") return Label::Real;
  throw DataError("unknown label '" + std::string(text) + "' (expected fake or real)");
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

Matrix Matrix::select_rows(std::span<const std::size_t> indices) const {
  Matrix out(indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto src = row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

bool Matrix::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace emotikon
