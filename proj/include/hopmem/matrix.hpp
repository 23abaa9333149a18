#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace hopmem {

// Dense row-major matrix of finite doubles; one row per vector. This is the
// raw storage used for activation batches, where duplicate rows are legal.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t dim, std::vector<double> data);

    std::size_t dim() const { return dim_; }
    std::size_t rows() const { return dim_ == 0 ? 0 : data_.size() / dim_; }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * dim_, dim_};
    }

    const std::vector<double>& data() const { return data_; }

private:
    std::size_t dim_ = 0;
    std::vector<double> data_;
};

// CSV: one vector per line, comma-separated decimal floats, lines starting
// with '#' skipped. Throws IngestError with the offending line number.
Matrix load_matrix_csv(std::istream& in);

// AMV1: magic "AMV1", u32 LE dimension, u64 LE count, then count*dim IEEE-754
// binary64 LE values, row-major.
Matrix load_matrix_amv1(std::istream& in);
void write_matrix_amv1(std::ostream& out, const Matrix& m);

} // namespace hopmem
