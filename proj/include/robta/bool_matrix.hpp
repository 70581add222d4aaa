#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace robta {

/// Dense boolean matrix, the carrier for corner relations. Product is
/// relational composition: (a*b)(i,k) iff a(i,j) and b(j,k) for some j.
class BoolMatrix {
 public:
  BoolMatrix() = default;
  BoolMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), bits_(rows * cols, 0) {}

  static BoolMatrix identity(std::size_t n) {
    BoolMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool operator()(std::size_t i, std::size_t j) const { return bits_[i * cols_ + j] != 0; }
  void set(std::size_t i, std::size_t j, bool v = true) { bits_[i * cols_ + j] = v ? 1 : 0; }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto b : bits_) c += b;
    return c;
  }

  bool left_total() const {
    for (std::size_t i = 0; i < rows_; ++i) {
      bool any = false;
      for (std::size_t j = 0; j < cols_ && !any; ++j) any = (*this)(i, j);
      if (!any) return false;
    }
    return true;
  }

  bool right_total() const {
    for (std::size_t j = 0; j < cols_; ++j) {
      bool any = false;
      for (std::size_t i = 0; i < rows_ && !any; ++i) any = (*this)(i, j);
      if (!any) return false;
    }
    return true;
  }

  BoolMatrix operator*(const BoolMatrix& b) const {
    BoolMatrix out(rows_, b.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if ((*this)(i, j))
          for (std::size_t k = 0; k < b.cols_; ++k)
            if (b(j, k)) out.set(i, k);
    return out;
  }

  BoolMatrix operator|(const BoolMatrix& b) const {
    BoolMatrix out = *this;
    for (std::size_t k = 0; k < bits_.size(); ++k) out.bits_[k] |= b.bits_[k];
    return out;
  }

  /// Reflexive-transitive closure (square matrices).
  BoolMatrix closure() const {
    BoolMatrix r = *this | identity(rows_);
    for (std::size_t k = 0; k < rows_; ++k)
      for (std::size_t i = 0; i < rows_; ++i)
        if (r(i, k))
          for (std::size_t j = 0; j < rows_; ++j)
            if (r(k, j)) r.set(i, j);
    return r;
  }

  /// Rows as strings of 0/1, e.g. "110/010".
  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i) s += '/';
      for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) ? '1' : '0';
    }
    return s;
  }

  auto operator<=>(const BoolMatrix&) const = default;
  bool operator==(const BoolMatrix&) const = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::uint8_t> bits_;
};

}  // namespace robta
