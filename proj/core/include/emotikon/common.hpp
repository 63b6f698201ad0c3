#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace emotikon {

// Binary veracity label. Fake sorts first and wins every tie.
enum class Label : std::uint8_t { Fake = 0, Real = 1 };

inline constexpr std::size_t kNumLabels = 2;

std::string_view to_string(Label label);

// Throws DataError for anything other than "fake" / "real".
Label parse_label(std::string_view text);

inline std::size_t label_index(Label label) { return static_cast<std::size_t>(label); }

// Raised for malformed or inconsistent input data (files, records).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A DataError tied to a 1-based line of an input file.
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  // Copies the listed rows, in order, into a new matrix.
  Matrix select_rows(std::span<const std::size_t> indices) const;

  bool all_finite() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);

}  // namespace emotikon
