#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "ncpopt/word.hpp"

namespace ncpopt {

class NcPolynomial;
inline NcPolynomial operator*(const NcPolynomial& f, const NcPolynomial& g);

/// Real polynomial in n noncommuting symmetric variables. Terms are kept
/// in a graded-lex ordered map with no stored zero coefficients, so
/// iteration order (and everything built on it) is deterministic.
///
/// The degree of the zero polynomial is "minus infinity", represented as
/// an empty optional, never as an integer sentinel.
class NcPolynomial {
public:
    using TermMap = std::map<Word, double>;

    explicit NcPolynomial(int nvars, double drop_tol = 0.0) : nvars_(nvars), drop_tol_(drop_tol) {
        if (nvars < 0) throw std::invalid_argument("nvars must be nonnegative");
    }

    static NcPolynomial constant(int nvars, double c) {
        NcPolynomial f(nvars);
        f.add_term(Word::unit(), c);
        return f;
    }
    static NcPolynomial variable(int nvars, int i) {
        NcPolynomial f(nvars);
        f.add_term(Word::letter(i), 1.0);
        return f;
    }
    static NcPolynomial monomial(int nvars, const Word& w, double c) {
        NcPolynomial f(nvars);
        f.add_term(w, c);
        return f;
    }

    int nvars() const { return nvars_; }
    double drop_tol() const { return drop_tol_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }

    double coeff(const Word& w) const {
        auto it = terms_.find(w);
        return it == terms_.end() ? 0.0 : it->second;
    }

    /// Merges c*w into the polynomial, dropping the term if the merged
    /// coefficient falls within the drop tolerance (default: exact zero).
    void add_term(const Word& w, double c) {
        if (w.max_letter() > nvars_)
            throw std::out_of_range("variable index out of range: x" + std::to_string(w.max_letter()));
        auto [it, inserted] = terms_.try_emplace(w, c);
        if (!inserted) it->second += c;
        if (std::abs(it->second) <= drop_tol_) terms_.erase(it);
    }

    /// Degree, or empty for the zero polynomial.
    std::optional<int> degree() const {
        if (terms_.empty()) return std::nullopt;
        return terms_.rbegin()->first.degree();  // graded order: last term is maximal
    }
    std::optional<int> min_degree() const {
        if (terms_.empty()) return std::nullopt;
        return terms_.begin()->first.degree();
    }

    NcPolynomial star() const {
        NcPolynomial out(nvars_, drop_tol_);
        for (const auto& [w, c] : terms_) out.terms_.emplace(w.star(), c);
        return out;
    }

    bool is_symmetric() const {
        for (const auto& [w, c] : terms_) {
            Word s = w.star();
            if (s != w && coeff(s) != c) return false;
        }
        return true;
    }

    NcPolynomial& operator+=(const NcPolynomial& g) {
        check_same_vars(g);
        for (const auto& [w, c] : g.terms_) add_term(w, c);
        return *this;
    }
    NcPolynomial& operator-=(const NcPolynomial& g) {
        check_same_vars(g);
        for (const auto& [w, c] : g.terms_) add_term(w, -c);
        return *this;
    }
    NcPolynomial& operator*=(double c) {
        if (c == 0.0) {
            terms_.clear();
            return *this;
        }
        for (auto& [w, v] : terms_) v *= c;
        return *this;
    }

    friend NcPolynomial operator+(NcPolynomial f, const NcPolynomial& g) { return f += g; }
    friend NcPolynomial operator-(NcPolynomial f, const NcPolynomial& g) { return f -= g; }
    friend NcPolynomial operator*(NcPolynomial f, double c) { return f *= c; }
    friend NcPolynomial operator*(double c, NcPolynomial f) { return f *= c; }
    friend NcPolynomial operator-(NcPolynomial f) { return f *= -1.0; }

    friend bool operator==(const NcPolynomial& f, const NcPolynomial& g) {
        return f.nvars_ == g.nvars_ && f.terms_ == g.terms_;
    }

    /// (f + f*)/2. Minimal eigenvalues only see the symmetric part, since
    /// <f(A)v,v> = <sym(f)(A)v,v> for every tuple of symmetric matrices.
    NcPolynomial symmetrized() const {
        NcPolynomial out = *this;
        out += star();
        out *= 0.5;
        return out;
    }

    /// Projects every term onto its cyclic canonical representative and
    /// cancels; the result generates the same trace functional values.
    NcPolynomial cyclic_projection() const {
        NcPolynomial out(nvars_, drop_tol_);
        for (const auto& [w, c] : terms_) out.add_term(cyclic_canonical(w), c);
        return out;
    }

    /// Degree of the cheapest cyclically equivalent polynomial; empty when
    /// the polynomial is cyclically equivalent to 0.
    std::optional<int> cyclic_degree() const { return cyclic_projection().degree(); }

    /// Union of the supports of all terms (1-based variable indices).
    std::set<int> support() const {
        std::set<int> s;
        for (const auto& [w, c] : terms_)
            for (int i : w.support()) s.insert(i);
        return s;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [w, c] : terms_) {
            double a = c;
            if (first) {
                if (a < 0) { os << "-"; a = -a; }
            } else {
                os << (a < 0 ? " - " : " + ");
                a = std::abs(a);
            }
            first = false;
            if (w.is_unit()) os << fmt_coeff(a);
            else if (a == 1.0) os << w.str();
            else os << fmt_coeff(a) << "*" << w.str();
        }
        return os.str();
    }

private:
    static std::string fmt_coeff(double a) {
        std::ostringstream os;
        os.precision(17);
        os << a;
        return os.str();
    }
    void check_same_vars(const NcPolynomial& g) const {
        if (nvars_ != g.nvars_) throw std::invalid_argument("nvars mismatch");
    }

    int nvars_;
    double drop_tol_;
    TermMap terms_;
};

inline NcPolynomial operator*(const NcPolynomial& f, const NcPolynomial& g) {
    if (f.nvars() != g.nvars()) throw std::invalid_argument("nvars mismatch");
    NcPolynomial out(f.nvars(), std::max(f.drop_tol(), g.drop_tol()));
    for (const auto& [u, a] : f.terms())
        for (const auto& [v, b] : g.terms()) out.add_term(u * v, a * b);
    return out;
}

inline NcPolynomial pow(const NcPolynomial& f, int m) {
    if (m < 0) throw std::invalid_argument("negative power");
    NcPolynomial out = NcPolynomial::constant(f.nvars(), 1.0);
    for (int i = 0; i < m; ++i) out = out * f;
    return out;
}

}  // namespace ncpopt
