#include "hopmem/matrix.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hopmem/error.hpp"

namespace hopmem {

namespace {

void put_bytes(std::ostream& out, std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) {
        out.put(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
}

std::uint64_t get_bytes(std::istream& in, int n, const char* what) {
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
        const int c = in.get();
        if (c == std::istream::traits_type::eof()) {
            throw IngestError(0, std::string("amv1: truncated ") + what);
        }
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
    }
    return v;
}

} // namespace

Matrix::Matrix(std::size_t dim, std::vector<double> data) : dim_(dim), data_(std::move(data)) {
    if (dim_ == 0) {
        throw std::invalid_argument("matrix: dimension must be >= 1");
    }
    if (data_.size() % dim_ != 0) {
        throw std::invalid_argument("matrix: data size not a multiple of dimension");
    }
    for (double x : data_) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument("matrix: non-finite entry");
        }
    }
}

Matrix load_matrix_csv(std::istream& in) {
    std::vector<double> data;
    std::size_t dim = 0;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#') {
            continue;
        }
        std::size_t fields = 0;
        std::size_t pos = 0;
        while (true) {
            std::size_t comma = line.find(',', pos);
            const std::string cell =
                line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            try {
                std::size_t used = 0;
                const double v = std::stod(cell, &used);
                while (used < cell.size() && (cell[used] == ' ' || cell[used] == '\t')) {
                    ++used;
                }
                if (used != cell.size()) {
                    throw std::invalid_argument("trailing characters");
                }
                if (!std::isfinite(v)) {
                    throw IngestError(lineno, "non-finite value '" + cell + "'");
                }
                data.push_back(v);
            } catch (const IngestError&) {
                throw;
            } catch (const std::exception&) {
                throw IngestError(lineno, "malformed number '" + cell + "'");
            }
            ++fields;
            if (comma == std::string::npos) {
                break;
            }
            pos = comma + 1;
        }
        if (dim == 0) {
            dim = fields;
        } else if (fields != dim) {
            throw IngestError(lineno, "expected " + std::to_string(dim) + " values, got " +
                                          std::to_string(fields));
        }
    }
    if (dim == 0) {
        throw IngestError(lineno, "no data rows");
    }
    return Matrix(dim, std::move(data));
}

Matrix load_matrix_amv1(std::istream& in) {
    char magic[4] = {};
    in.read(magic, 4);
    if (in.gcount() != 4 || std::memcmp(magic, "AMV1", 4) != 0) {
        throw IngestError(0, "amv1: bad magic");
    }
    const std::uint32_t dim = static_cast<std::uint32_t>(get_bytes(in, 4, "dimension"));
    const std::uint64_t count = get_bytes(in, 8, "count");
    if (dim == 0) {
        throw IngestError(0, "amv1: zero dimension");
    }
    if (count == 0) {
        throw IngestError(0, "amv1: empty set");
    }
    std::vector<double> data;
    data.reserve(static_cast<std::size_t>(count) * dim);
    for (std::uint64_t i = 0; i < count * static_cast<std::uint64_t>(dim); ++i) {
        const std::uint64_t bits = get_bytes(in, 8, "values");
        double v;
        std::memcpy(&v, &bits, sizeof v);
        if (!std::isfinite(v)) {
            throw IngestError(0, "amv1: non-finite value at index " + std::to_string(i));
        }
        data.push_back(v);
    }
    return Matrix(dim, std::move(data));
}

void write_matrix_amv1(std::ostream& out, const Matrix& m) {
    out.write("AMV1", 4);
    put_bytes(out, m.dim(), 4);
    put_bytes(out, m.rows(), 8);
    for (double v : m.data()) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        put_bytes(out, bits, 8);
    }
}

} // namespace hopmem
