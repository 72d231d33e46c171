#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

// Matrix snapshots in two interchangeable encodings:
//  - binary: magic "RLOP", uint32 rows, uint32 cols, then row-major
//    (re, im) float64 pairs, all little-endian;
//  - text: first line "rows cols", then one row per line with "re im"
//    pairs printed as %.17g (round-trips double exactly).

namespace relatom::io {

static_assert(std::endian::native == std::endian::little,
              "binary matrix format assumes a little-endian host");

using Matrix = Eigen::MatrixXcd;

inline constexpr char kMagic[4] = {'R', 'L', 'O', 'P'};

inline void write_binary(const std::string& path, const Matrix& m) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(kMagic, 4);
    const std::uint32_t rows = static_cast<std::uint32_t>(m.rows());
    const std::uint32_t cols = static_cast<std::uint32_t>(m.cols());
    out.write(reinterpret_cast<const char*>(&rows), 4);
    out.write(reinterpret_cast<const char*>(&cols), 4);
    for (long i = 0; i < m.rows(); ++i)
        for (long j = 0; j < m.cols(); ++j) {
            const double re = m(i, j).real();
            const double im = m(i, j).imag();
            out.write(reinterpret_cast<const char*>(&re), 8);
            out.write(reinterpret_cast<const char*>(&im), 8);
        }
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline Matrix read_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::string(magic, 4) != std::string(kMagic, 4))
        throw std::runtime_error("bad matrix file magic: " + path);
    std::uint32_t rows = 0, cols = 0;
    in.read(reinterpret_cast<char*>(&rows), 4);
    in.read(reinterpret_cast<char*>(&cols), 4);
    if (!in) throw std::runtime_error("truncated matrix header: " + path);
    Matrix m(rows, cols);
    for (std::uint32_t i = 0; i < rows; ++i)
        for (std::uint32_t j = 0; j < cols; ++j) {
            double re = 0.0, im = 0.0;
            in.read(reinterpret_cast<char*>(&re), 8);
            in.read(reinterpret_cast<char*>(&im), 8);
            m(i, j) = {re, im};
        }
    if (!in) throw std::runtime_error("truncated matrix payload: " + path);
    return m;
}

inline void write_text(const std::string& path, const Matrix& m) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << m.rows() << ' ' << m.cols() << '\n';
    char buf[64];
    for (long i = 0; i < m.rows(); ++i) {
        for (long j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g %.17g", m(i, j).real(), m(i, j).imag());
            out << (j ? " " : "") << buf;
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline Matrix read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    long rows = 0, cols = 0;
    in >> rows >> cols;
    if (!in || rows < 0 || cols < 0) throw std::runtime_error("bad matrix text header: " + path);
    Matrix m(rows, cols);
    for (long i = 0; i < rows; ++i)
        for (long j = 0; j < cols; ++j) {
            double re = 0.0, im = 0.0;
            in >> re >> im;
            m(i, j) = {re, im};
        }
    if (!in) throw std::runtime_error("truncated matrix text payload: " + path);
    return m;
}

}  // namespace relatom::io
