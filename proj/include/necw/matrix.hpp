#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "necw/gf.hpp"

namespace necw {

using Vec = std::vector<fel>;

// Dense row-major matrix over a shared field.  Value semantics throughout;
// elimination uses first-nonzero pivoting (arithmetic is exact, no pivot
// quality concerns).
class Matrix {
public:
    Matrix() = default;
    Matrix(FieldPtr f, std::size_t rows, std::size_t cols)
        : f_(std::move(f)), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

    static Matrix identity(FieldPtr f, std::size_t n) {
        Matrix m(std::move(f), n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    static Matrix from_rows(FieldPtr f, const std::vector<Vec>& rows) {
        std::size_t c = rows.empty() ? 0 : rows[0].size();
        Matrix m(std::move(f), rows.size(), c);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != c) throw validation_error("ragged rows");
            for (std::size_t j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
        }
        return m;
    }

    const FieldPtr& field() const { return f_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    fel& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    fel at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    Vec row(std::size_t i) const {
        return Vec(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
    }

    Vec col(std::size_t j) const {
        Vec v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = at(i, j);
        return v;
    }

    Matrix transpose() const {
        Matrix t(f_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    Matrix operator*(const Matrix& o) const {
        check_same_field(o);
        if (cols_ != o.rows_) throw validation_error("matrix product dimension mismatch");
        Matrix r(f_, rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                fel aik = at(i, k);
                if (!aik) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    r.at(i, j) = f_->add(r.at(i, j), f_->mul(aik, o.at(k, j)));
            }
        return r;
    }

    Matrix operator+(const Matrix& o) const {
        check_same_field(o);
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw validation_error("matrix sum dimension mismatch");
        Matrix r(f_, rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = f_->add(a_[i], o.a_[i]);
        return r;
    }

    Matrix operator-(const Matrix& o) const {
        check_same_field(o);
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw validation_error("matrix difference dimension mismatch");
        Matrix r(f_, rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = f_->sub(a_[i], o.a_[i]);
        return r;
    }

    Matrix select_rows(const std::vector<int>& idx) const {
        Matrix r(f_, idx.size(), cols_);
        for (std::size_t i = 0; i < idx.size(); ++i)
            for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = at(idx[i], j);
        return r;
    }

    Matrix select_cols(const std::vector<int>& idx) const {
        Matrix r(f_, rows_, idx.size());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < idx.size(); ++j) r.at(i, j) = at(i, idx[j]);
        return r;
    }

    std::size_t rank() const {
        Matrix w(*this);
        return w.eliminate();
    }

    // Basis of { x row vector : x * M = 0 }.
    std::vector<Vec> left_null_basis() const { return transpose().right_null_basis(); }

    // Basis of { y column vector : M * y = 0 }, returned as plain vectors.
    std::vector<Vec> right_null_basis() const {
        Matrix w(*this);
        std::vector<int> pivot_col;
        w.eliminate(&pivot_col);
        std::vector<bool> is_pivot(cols_, false);
        for (int c : pivot_col) is_pivot[c] = true;

        std::vector<Vec> basis;
        for (std::size_t free_c = 0; free_c < cols_; ++free_c) {
            if (is_pivot[free_c]) continue;
            Vec y(cols_, 0);
            y[free_c] = 1;
            // Back-substitute pivots against the free column.
            for (std::size_t r = pivot_col.size(); r-- > 0;) {
                std::size_t pc = pivot_col[r];
                fel s = 0;
                for (std::size_t j = pc + 1; j < cols_; ++j)
                    s = f_->add(s, f_->mul(w.at(r, j), y[j]));
                y[pc] = f_->neg(f_->div(s, w.at(r, pc)));
            }
            basis.push_back(std::move(y));
        }
        return basis;
    }

    Matrix inverse() const {
        if (rows_ != cols_) throw validation_error("only square matrices can be inverted");
        Matrix w(*this);
        Matrix inv = identity(f_, rows_);
        for (std::size_t col = 0; col < cols_; ++col) {
            std::size_t piv = rows_;
            for (std::size_t r = col; r < rows_; ++r)
                if (w.at(r, col) != 0) {
                    piv = r;
                    break;
                }
            if (piv == rows_) throw validation_error("matrix is singular");
            w.swap_rows(piv, col);
            inv.swap_rows(piv, col);
            fel d = f_->inv(w.at(col, col));
            w.scale_row(col, d);
            inv.scale_row(col, d);
            for (std::size_t r = 0; r < rows_; ++r) {
                if (r == col) continue;
                fel c = w.at(r, col);
                if (!c) continue;
                w.axpy_row(r, col, f_->neg(c));
                inv.axpy_row(r, col, f_->neg(c));
            }
        }
        return inv;
    }

    // Is v in the row space?
    bool in_rowspace(const Vec& v) const {
        Matrix ext(f_, rows_ + 1, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) ext.at(i, j) = at(i, j);
        for (std::size_t j = 0; j < cols_; ++j) ext.at(rows_, j) = v[j];
        return ext.rank() == rank();
    }

    // First solution of x * M = b under deterministic elimination, if any.
    std::optional<Vec> solve_left(const Vec& b) const {
        if (b.size() != cols_) throw validation_error("solve dimension mismatch");
        // Solve M^T x^T = b^T.
        Matrix t = transpose();
        Matrix aug(f_, t.rows(), t.cols() + 1);
        for (std::size_t i = 0; i < t.rows(); ++i) {
            for (std::size_t j = 0; j < t.cols(); ++j) aug.at(i, j) = t.at(i, j);
            aug.at(i, t.cols()) = b[i];
        }
        std::vector<int> pivot_col;
        aug.eliminate(&pivot_col);
        std::size_t nvars = t.cols();
        Vec x(nvars, 0);
        for (std::size_t r = pivot_col.size(); r-- > 0;) {
            std::size_t pc = pivot_col[r];
            if (pc == nvars) return std::nullopt;  // pivot in RHS column: inconsistent
            fel s = aug.at(r, nvars);
            for (std::size_t j = pc + 1; j < nvars; ++j)
                s = f_->sub(s, f_->mul(aug.at(r, j), x[j]));
            x[pc] = f_->div(s, aug.at(r, pc));
        }
        // Rows below the pivots are zero by construction; consistency is
        // caught by the pivot-in-RHS test above.
        return x;
    }

    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                if (j) s += " ";
                s += std::to_string(at(i, j));
            }
            s += "\n";
        }
        return s;
    }

    // Row echelon reduction in place; returns the rank and (optionally) the
    // pivot column of each nonzero row.
    std::size_t eliminate(std::vector<int>* pivot_cols = nullptr) {
        std::size_t r = 0;
        for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
            std::size_t piv = rows_;
            for (std::size_t i = r; i < rows_; ++i)
                if (at(i, c) != 0) {
                    piv = i;
                    break;
                }
            if (piv == rows_) continue;
            swap_rows(piv, r);
            for (std::size_t i = r + 1; i < rows_; ++i) {
                fel factor = f_->div(at(i, c), at(r, c));
                if (!factor) continue;
                axpy_row(i, r, f_->neg(factor));
            }
            if (pivot_cols) pivot_cols->push_back(static_cast<int>(c));
            ++r;
        }
        return r;
    }

private:
    void check_same_field(const Matrix& o) const {
        if (!f_ || !o.f_ || !f_->same(*o.f_))
            throw validation_error("matrices over different fields");
    }

    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t c = 0; c < cols_; ++c) std::swap(at(i, c), at(j, c));
    }

    void scale_row(std::size_t i, fel s) {
        for (std::size_t c = 0; c < cols_; ++c) at(i, c) = f_->mul(at(i, c), s);
    }

    // row i += s * row j
    void axpy_row(std::size_t i, std::size_t j, fel s) {
        for (std::size_t c = 0; c < cols_; ++c)
            at(i, c) = f_->add(at(i, c), f_->mul(s, at(j, c)));
    }

    FieldPtr f_;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<fel> a_;
};

// Row vector * matrix.
inline Vec vec_mat(const FieldPtr& f, const Vec& v, const Matrix& m) {
    if (v.size() != m.rows()) throw validation_error("vector-matrix dimension mismatch");
    Vec r(m.cols(), 0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i]) continue;
        for (std::size_t j = 0; j < m.cols(); ++j)
            r[j] = f->add(r[j], f->mul(v[i], m.at(i, j)));
    }
    return r;
}

inline fel dot(const FieldPtr& f, const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw validation_error("dot product dimension mismatch");
    fel s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s = f->add(s, f->mul(a[i], b[i]));
    return s;
}

inline Vec vec_add(const FieldPtr& f, const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = f->add(a[i], b[i]);
    return r;
}

inline Vec vec_sub(const FieldPtr& f, const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = f->sub(a[i], b[i]);
    return r;
}

inline Vec vec_scale(const FieldPtr& f, fel s, const Vec& a) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = f->mul(s, a[i]);
    return r;
}

inline bool is_zero(const Vec& v) {
    for (fel x : v)
        if (x) return false;
    return true;
}

inline int hamming_weight(const Vec& v) {
    int w = 0;
    for (fel x : v) w += (x != 0);
    return w;
}

// Scales so the first nonzero coordinate is 1; canonical representative of
// the projective class.
inline Vec projective_normalize(const FieldPtr& f, Vec v) {
    for (fel x : v)
        if (x) return vec_scale(f, f->inv(x), v);
    return v;
}

}  // namespace necw
