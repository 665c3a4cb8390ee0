#include "arcrom/mtx_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace arcrom::io {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

struct MtxHeader {
    bool coordinate = true;
    bool symmetric = false;
};

MtxHeader parse_header(std::istream& in, const std::string& path) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("matrix market: empty file " + path);
    std::istringstream hs(line);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || lower(object) != "matrix") {
        throw std::runtime_error("matrix market: malformed header in " + path);
    }
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);
    if (format != "coordinate" && format != "array") {
        throw std::runtime_error("matrix market: unsupported format '" + format + "' in " + path);
    }
    if (field != "real") {
        throw std::runtime_error("matrix market: unsupported field '" + field + "' in " + path);
    }
    if (symmetry != "general" && symmetry != "symmetric") {
        throw std::runtime_error("matrix market: unsupported symmetry '" + symmetry + "' in " + path);
    }
    return {format == "coordinate", symmetry == "symmetric"};
}

void skip_comments(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '%') return;
    }
    line.clear();
}

}  // namespace

void write_matrix_market(const SpMat& matrix, const std::string& path, bool symmetric) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("matrix market: cannot write " + path);
    out.precision(17);
    out << "%%MatrixMarket matrix coordinate real " << (symmetric ? "symmetric" : "general")
        << "\n";
    long count = 0;
    std::ostringstream body;
    body.precision(17);
    for (int col = 0; col < matrix.outerSize(); ++col) {
        for (SpMat::InnerIterator it(matrix, col); it; ++it) {
            if (symmetric && it.row() < it.col()) continue;
            body << it.row() + 1 << " " << it.col() + 1 << " " << it.value() << "\n";
            ++count;
        }
    }
    out << matrix.rows() << " " << matrix.cols() << " " << count << "\n";
    out << body.str();
}

SpMat read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("matrix market: cannot open " + path);
    const MtxHeader header = parse_header(in, path);
    std::string line;
    skip_comments(in, line);
    std::istringstream sizes(line);
    if (header.coordinate) {
        long rows = 0, cols = 0, nnz = 0;
        if (!(sizes >> rows >> cols >> nnz)) {
            throw std::runtime_error("matrix market: bad size line in " + path);
        }
        std::vector<Triplet> trips;
        trips.reserve(static_cast<std::size_t>(nnz) * (header.symmetric ? 2 : 1));
        for (long k = 0; k < nnz; ++k) {
            long i = 0, j = 0;
            double v = 0.0;
            if (!(in >> i >> j >> v)) {
                throw std::runtime_error("matrix market: truncated entries in " + path);
            }
            trips.emplace_back(i - 1, j - 1, v);
            if (header.symmetric && i != j) trips.emplace_back(j - 1, i - 1, v);
        }
        SpMat out(rows, cols);
        out.setFromTriplets(trips.begin(), trips.end());
        return out;
    }
    long rows = 0, cols = 0;
    if (!(sizes >> rows >> cols)) {
        throw std::runtime_error("matrix market: bad size line in " + path);
    }
    Mat dense(rows, cols);
    for (long j = 0; j < cols; ++j) {
        for (long i = (header.symmetric ? j : 0); i < rows; ++i) {
            double v = 0.0;
            if (!(in >> v)) throw std::runtime_error("matrix market: truncated entries in " + path);
            dense(i, j) = v;
            if (header.symmetric) dense(j, i) = v;
        }
    }
    return dense.sparseView();
}

void write_dense_matrix_market(const Mat& matrix, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("matrix market: cannot write " + path);
    out.precision(17);
    out << "%%MatrixMarket matrix array real general\n";
    out << matrix.rows() << " " << matrix.cols() << "\n";
    for (long j = 0; j < matrix.cols(); ++j) {
        for (long i = 0; i < matrix.rows(); ++i) out << matrix(i, j) << "\n";
    }
}

Mat read_dense_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("matrix market: cannot open " + path);
    const MtxHeader header = parse_header(in, path);
    std::string line;
    skip_comments(in, line);
    std::istringstream sizes(line);
    if (header.coordinate) {
        in.close();
        return Mat(read_matrix_market(path));
    }
    long rows = 0, cols = 0;
    if (!(sizes >> rows >> cols)) {
        throw std::runtime_error("matrix market: bad size line in " + path);
    }
    Mat dense(rows, cols);
    for (long j = 0; j < cols; ++j) {
        for (long i = (header.symmetric ? j : 0); i < rows; ++i) {
            double v = 0.0;
            if (!(in >> v)) throw std::runtime_error("matrix market: truncated entries in " + path);
            dense(i, j) = v;
            if (header.symmetric) dense(j, i) = v;
        }
    }
    return dense;
}

void write_vector(const Vec& v, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("vector: cannot write " + path);
    out.precision(17);
    for (long i = 0; i < v.size(); ++i) out << v[i] << "\n";
}

Vec read_vector(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("vector: cannot open " + path);
    std::vector<double> vals;
    double v = 0.0;
    while (in >> v) vals.push_back(v);
    Vec out(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) out[i] = vals[i];
    return out;
}

}  // namespace arcrom::io
