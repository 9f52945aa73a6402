#include <cstdint>
#include <cstring>
#include <iomanip>
#include <istream>
#include <ostream>
#include <string>

#include "psido/errors.hpp"
#include "psido/quantization.hpp"

namespace psido {

void write_matrix_text(std::ostream& out, const CMatrix& m) {
    out << "cmatrix " << m.rows() << ' ' << m.cols() << '\n' << std::setprecision(17);
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (j) out << "  ";
            out << m(i, j).real() << ' ' << m(i, j).imag();
        }
        out << '\n';
    }
}

CMatrix read_matrix_text(std::istream& in) {
    std::string tag;
    long rows = -1, cols = -1;
    if (!(in >> tag >> rows >> cols) || tag != "cmatrix" || rows < 0 || cols < 0)
        throw ParseError("bad matrix header", 1, 1);
    CMatrix m(static_cast<Index>(rows), static_cast<Index>(cols));
    for (long i = 0; i < rows; ++i)
        for (long j = 0; j < cols; ++j) {
            double re, im;
            if (!(in >> re >> im)) throw ParseError("truncated matrix data", int(i) + 2, int(2 * j) + 1);
            m(i, j) = {re, im};
        }
    return m;
}

void write_matrix_binary(std::ostream& out, const CMatrix& m) {
    out.write("PSDM", 4);
    const std::uint64_t dims[2] = {std::uint64_t(m.rows()), std::uint64_t(m.cols())};
    out.write(reinterpret_cast<const char*>(dims), sizeof dims);
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) {
            const double v[2] = {m(i, j).real(), m(i, j).imag()};
            out.write(reinterpret_cast<const char*>(v), sizeof v);
        }
}

CMatrix read_matrix_binary(std::istream& in) {
    char magic[4];
    std::uint64_t dims[2];
    if (!in.read(magic, 4) || std::memcmp(magic, "PSDM", 4) != 0) throw ParseError("bad matrix magic", 1, 1);
    if (!in.read(reinterpret_cast<char*>(dims), sizeof dims)) throw ParseError("truncated matrix header", 1, 5);
    CMatrix m(static_cast<Index>(dims[0]), static_cast<Index>(dims[1]));
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) {
            double v[2];
            if (!in.read(reinterpret_cast<char*>(v), sizeof v)) throw ParseError("truncated matrix data", 1, 1);
            m(i, j) = {v[0], v[1]};
        }
    return m;
}

}  // namespace psido
