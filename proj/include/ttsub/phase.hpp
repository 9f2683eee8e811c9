#pragma once

#include <complex>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "ttsub/rational.hpp"

namespace ttsub {

// A unit-modulus scalar e^{2*pi*i*theta}, with theta stored additively as a
// rational turn in [0,1) plus rational multiples of formal irrational symbols
// t1, t2, ... assumed jointly rationally independent of each other and of 1.
struct Phase {
    Rat turn;                    // reduced, in [0,1)
    std::map<int, Rat> irr;      // symbol id -> nonzero coefficient

    Phase() = default;
    explicit Phase(Rat t) : turn(t.mod1()) {}
    Phase(Rat t, std::map<int, Rat> coeffs) : turn(t.mod1()), irr(std::move(coeffs)) {
        for (auto it = irr.begin(); it != irr.end();)
            it = it->second.is_zero() ? irr.erase(it) : std::next(it);
    }

    static Phase one() { return Phase(); }
    static Phase symbol(int id, Rat coeff = Rat(1)) { return Phase(Rat(0), {{id, coeff}}); }

    bool is_one() const { return turn.is_zero() && irr.empty(); }
    bool is_rational() const { return irr.empty(); }

    friend Phase operator*(const Phase& a, const Phase& b) {
        Phase r;
        r.turn = (a.turn + b.turn).mod1();
        r.irr = a.irr;
        for (const auto& [id, c] : b.irr) {
            Rat s = (r.irr.count(id) ? r.irr[id] : Rat(0)) + c;
            if (s.is_zero()) r.irr.erase(id);
            else r.irr[id] = s;
        }
        return r;
    }

    Phase conj() const {
        Phase r;
        r.turn = (-turn).mod1();
        for (const auto& [id, c] : irr) r.irr[id] = -c;
        return r;
    }

    Phase pow(long long e) const {
        Phase r;
        r.turn = (Rat(e) * turn).mod1();
        for (const auto& [id, c] : irr) {
            Rat s = Rat(e) * c;
            if (!s.is_zero()) r.irr[id] = s;
        }
        return r;
    }

    // Smallest n >= 1 with n*this trivial; nullopt when an irrational symbol
    // is present (it never cancels).
    std::optional<long long> order() const {
        if (!irr.empty()) return std::nullopt;
        return turn.den;
    }

    friend bool operator==(const Phase& a, const Phase& b) { return a.turn == b.turn && a.irr == b.irr; }
    friend bool operator!=(const Phase& a, const Phase& b) { return !(a == b); }
    friend bool operator<(const Phase& a, const Phase& b) {
        if (a.turn != b.turn) return a.turn < b.turn;
        return std::lexicographical_compare(a.irr.begin(), a.irr.end(), b.irr.begin(), b.irr.end(),
                                            [](const auto& x, const auto& y) {
                                                if (x.first != y.first) return x.first < y.first;
                                                return x.second < y.second;
                                            });
    }

    std::complex<double> to_complex(const std::map<int, double>& symbol_values = {}) const {
        double theta = turn.to_double();
        for (const auto& [id, c] : irr) {
            auto it = symbol_values.find(id);
            if (it == symbol_values.end())
                throw std::invalid_argument("unbound irrational symbol t" + std::to_string(id));
            theta += c.to_double() * it->second;
        }
        constexpr double two_pi = 6.283185307179586476925286766559;
        return std::polar(1.0, two_pi * theta);
    }

    std::string str() const {
        std::ostringstream os;
        os << turn.str();
        for (const auto& [id, c] : irr) os << " + " << c.str() << "*t" << id;
        return os.str();
    }
};

// Text syntax: "p/q" optionally followed by "+ r/s*tN" terms.
inline Phase parse_phase(const std::string& text) {
    // split on '+', trimming whitespace
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
        if (ch == '+') { parts.push_back(cur); cur.clear(); }
        else if (!isspace(static_cast<unsigned char>(ch))) cur.push_back(ch);
    }
    parts.push_back(cur);
    if (parts.empty() || parts[0].empty())
        throw std::invalid_argument("bad phase literal: '" + text + "'");
    Phase p;
    bool first = true;
    for (const auto& term : parts) {
        auto star = term.find('*');
        if (star == std::string::npos) {
            if (!first) throw std::invalid_argument("bad phase literal: '" + text + "'");
            p.turn = parse_rat(term).mod1();
        } else {
            std::string sym = term.substr(star + 1);
            if (sym.size() < 2 || sym[0] != 't')
                throw std::invalid_argument("bad symbol in phase literal: '" + text + "'");
            int id = std::stoi(sym.substr(1));
            Rat c = parse_rat(term.substr(0, star));
            if (!c.is_zero()) {
                Rat s = (p.irr.count(id) ? p.irr[id] : Rat(0)) + c;
                if (s.is_zero()) p.irr.erase(id);
                else p.irr[id] = s;
            }
        }
        first = false;
    }
    return p;
}

// A complete array of phases indexed by pairs (row, col); rows are group
// elements of H, columns of K, by index.  Multiplication is pointwise.
struct PhaseArray {
    int rows = 0, cols = 0;
    std::vector<Phase> a;   // row-major

    PhaseArray() = default;
    PhaseArray(int r, int c) : rows(r), cols(c), a(r * c) {}

    Phase& at(int r, int c) { return a[r * cols + c]; }
    const Phase& at(int r, int c) const { return a[r * cols + c]; }

    static PhaseArray ones(int r, int c) { return PhaseArray(r, c); }

    friend PhaseArray operator*(const PhaseArray& x, const PhaseArray& y) {
        if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("PhaseArray size mismatch");
        PhaseArray r(x.rows, x.cols);
        for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.a[i] * y.a[i];
        return r;
    }

    PhaseArray conj() const {
        PhaseArray r(rows, cols);
        for (size_t i = 0; i < a.size(); ++i) r.a[i] = a[i].conj();
        return r;
    }

    // Index shift: entry (r,c) of the result reads (row_map[r], col_map[c]).
    PhaseArray remap(const std::vector<int>& row_map, const std::vector<int>& col_map) const {
        PhaseArray r(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                r.at(i, j) = at(row_map[i], col_map[j]);
        return r;
    }

    bool is_ones() const {
        for (const auto& p : a) if (!p.is_one()) return false;
        return true;
    }

    // True iff A(h,k)*A(0,0) == A(h,0)*A(0,k) everywhere, i.e. A = f(h)g(k).
    bool is_product_form() const {
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                if (at(i, j) * at(0, 0) != at(i, 0) * at(0, j)) return false;
        return true;
    }

    // True iff every row equals the first row.
    bool is_column_function() const {
        for (int i = 1; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                if (at(i, j) != at(0, j)) return false;
        return true;
    }

    // True iff every row is constant, i.e. A depends only on h.
    bool is_row_function() const {
        for (int i = 0; i < rows; ++i)
            for (int j = 1; j < cols; ++j)
                if (at(i, j) != at(i, 0)) return false;
        return true;
    }

    // Divide each column by its first entry: first row becomes all ones.
    PhaseArray column_normalized() const {
        PhaseArray r(rows, cols);
        for (int j = 0; j < cols; ++j) {
            Phase d = at(0, j).conj();
            for (int i = 0; i < rows; ++i) r.at(i, j) = at(i, j) * d;
        }
        return r;
    }

    // Column-normalize, then divide each row by its first entry: first row
    // and first column all ones.  Idempotent.
    PhaseArray standardized() const {
        PhaseArray r = column_normalized();
        for (int i = 0; i < r.rows; ++i) {
            Phase d = r.at(i, 0).conj();
            for (int j = 0; j < r.cols; ++j) r.at(i, j) = r.at(i, j) * d;
        }
        return r;
    }

    friend bool operator==(const PhaseArray& x, const PhaseArray& y) {
        return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
    }
    friend bool operator!=(const PhaseArray& x, const PhaseArray& y) { return !(x == y); }

    std::string key() const {
        std::ostringstream os;
        os << rows << 'x' << cols << ':';
        for (const auto& p : a) os << p.str() << ';';
        return os.str();
    }
};

} // namespace ttsub
