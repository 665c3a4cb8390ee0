#include "arcrom/tensor_set.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace arcrom::ident {

TensorSet::TensorSet(int m, BasisTag tag) : m_(m), tag_(tag) {
    if (m < 1) throw std::invalid_argument("tensor set: m must be positive");
    k1_ = Mat::Zero(m, m);
    k2_ = Mat::Zero(m, pair_count());
    k3_ = Mat::Zero(m, triple_count());
}

int TensorSet::pair_index(int j, int k) const {
    // (j,k), j <= k, lexicographic.
    return j * m_ - j * (j - 1) / 2 + (k - j);
}

int TensorSet::triple_index(int j, int k, int l) const {
    // (j,k,l), j <= k <= l, lexicographic: pairs (k,l) within the tail range.
    const int tail = m_ - j;
    const int before_j = (m_ * (m_ + 1) * (m_ + 2) - tail * (tail + 1) * (tail + 2)) / 6;
    const int kj = k - j, lj = l - j;
    return before_j + kj * tail - kj * (kj - 1) / 2 + (lj - kj);
}

Vec TensorSet::force(const Vec& eta) const {
    Vec m2(pair_count());
    for (int j = 0, p = 0; j < m_; ++j) {
        for (int k = j; k < m_; ++k, ++p) m2[p] = eta[j] * eta[k];
    }
    Vec m3(triple_count());
    for (int j = 0, t = 0; j < m_; ++j) {
        for (int k = j; k < m_; ++k) {
            for (int l = k; l < m_; ++l, ++t) m3[t] = eta[j] * eta[k] * eta[l];
        }
    }
    return k1_ * eta + k2_ * m2 + k3_ * m3;
}

Mat TensorSet::jacobian(const Vec& eta) const {
    Mat jac = k1_;
    for (int j = 0, p = 0; j < m_; ++j) {
        for (int k = j; k < m_; ++k, ++p) {
            jac.col(j) += eta[k] * k2_.col(p);
            jac.col(k) += eta[j] * k2_.col(p);
        }
    }
    for (int j = 0, t = 0; j < m_; ++j) {
        for (int k = j; k < m_; ++k) {
            for (int l = k; l < m_; ++l, ++t) {
                jac.col(j) += (eta[k] * eta[l]) * k3_.col(t);
                jac.col(k) += (eta[j] * eta[l]) * k3_.col(t);
                jac.col(l) += (eta[j] * eta[k]) * k3_.col(t);
            }
        }
    }
    return jac;
}

void write_tensor_set(const TensorSet& set, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("tensor set: cannot write " + path);
    out.precision(17);
    const int m = set.m();
    out << "m " << m << "\n";
    out << "basis " << (set.tag() == BasisTag::V ? "V" : "W") << "\n";
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (set.k1()(i, j) != 0.0) out << "1 " << i + 1 << " " << j + 1 << " " << set.k1()(i, j) << "\n";
        }
    }
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int k = j; k < m; ++k) {
                const double v = set.k2_at(i, j, k);
                if (v != 0.0) out << "2 " << i + 1 << " " << j + 1 << " " << k + 1 << " " << v << "\n";
            }
        }
    }
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int k = j; k < m; ++k) {
                for (int l = k; l < m; ++l) {
                    const double v = set.k3_at(i, j, k, l);
                    if (v != 0.0) {
                        out << "3 " << i + 1 << " " << j + 1 << " " << k + 1 << " " << l + 1 << " "
                            << v << "\n";
                    }
                }
            }
        }
    }
}

TensorSet read_tensor_set(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("tensor set: cannot open " + path);
    std::string tag;
    int m = 0;
    std::string basis;
    in >> tag >> m;
    if (tag != "m" || m < 1) throw std::runtime_error("tensor set: malformed header in " + path);
    in >> tag >> basis;
    if (tag != "basis" || (basis != "V" && basis != "W")) {
        throw std::runtime_error("tensor set: malformed header in " + path);
    }
    TensorSet set(m, basis == "V" ? BasisTag::V : BasisTag::W);
    int order = 0;
    while (in >> order) {
        int i = 0, j = 0, k = 0, l = 0;
        double v = 0.0;
        if (order == 1) {
            in >> i >> j >> v;
            set.k1()(i - 1, j - 1) = v;
        } else if (order == 2) {
            in >> i >> j >> k >> v;
            set.k2_at(i - 1, j - 1, k - 1) = v;
        } else if (order == 3) {
            in >> i >> j >> k >> l >> v;
            set.k3_at(i - 1, j - 1, k - 1, l - 1) = v;
        } else {
            throw std::runtime_error("tensor set: bad entry order in " + path);
        }
        if (!in) throw std::runtime_error("tensor set: truncated entry in " + path);
    }
    return set;
}

}  // namespace arcrom::ident
