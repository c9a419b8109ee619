#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cgr/chem/graph.hpp"

namespace cgr::chem {

struct SyntaxError : std::runtime_error {
    size_t position;
    SyntaxError(size_t pos, const std::string& reason)
        : std::runtime_error("syntax error at " + std::to_string(pos) + ": " + reason),
          position(pos) {}
};

struct LengthError : std::runtime_error {
    explicit LengthError(size_t len, size_t cap)
        : std::runtime_error("string length " + std::to_string(len) + " exceeds cap " +
                             std::to_string(cap)) {}
};

inline constexpr size_t kDefaultMaxLen = 156;

namespace detail {

inline std::optional<BondOrder> bond_from_char(char c) {
    switch (c) {
        case '.': return BondOrder::None;
        case '-': return BondOrder::Single;
        case '=': return BondOrder::Double;
        case '#': return BondOrder::Triple;
        case ':': return BondOrder::Aromatic;
        default: return std::nullopt;
    }
}

class Parser {
public:
    Parser(const std::string& text) : s_(text) {}

    CgrGraph run() {
        while (pos_ < s_.size()) step();
        if (!branch_stack_.empty()) throw SyntaxError(s_.size(), "unmatched '('");
        if (!open_rings_.empty())
            throw SyntaxError(s_.size(), "unclosed ring digit " +
                                             std::to_string(open_rings_.begin()->first));
        if (pending_) throw SyntaxError(s_.size(), "dangling bond at end of input");
        if (g_.atoms.empty()) throw SyntaxError(0, "no atoms");
        g_.source_text = s_;
        return std::move(g_);
    }

private:
    using PendingBond = std::pair<BondOrder, BondOrder>;

    void step() {
        char c = s_[pos_];
        if (c == '(') {
            if (prev_ < 0) throw SyntaxError(pos_, "branch before any atom");
            if (pending_) throw SyntaxError(pos_, "bond before '('");
            branch_stack_.push_back(prev_);
            ++pos_;
        } else if (c == ')') {
            if (branch_stack_.empty()) throw SyntaxError(pos_, "unmatched ')'");
            if (pending_) throw SyntaxError(pos_, "dangling bond before ')'");
            prev_ = branch_stack_.back();
            branch_stack_.pop_back();
            ++pos_;
        } else if (c == '.') {
            if (pending_) throw SyntaxError(pos_, "bond before '.'");
            prev_ = -1;
            ++pos_;
        } else if (c == '-' || c == '=' || c == '#' || c == ':') {
            if (pending_) throw SyntaxError(pos_, "two consecutive bond tokens");
            BondOrder o = *bond_from_char(c);
            pending_ = PendingBond{o, o};
            ++pos_;
        } else if (c == '%') {
            if (pos_ + 2 >= s_.size() || !std::isdigit(s_[pos_ + 1]) || !std::isdigit(s_[pos_ + 2]))
                throw SyntaxError(pos_, "'%' needs two digits");
            int num = (s_[pos_ + 1] - '0') * 10 + (s_[pos_ + 2] - '0');
            pos_ += 3;
            ring(num);
        } else if (std::isdigit(c)) {
            ++pos_;
            ring(c - '0');
        } else if (c == '[') {
            char next = pos_ + 1 < s_.size() ? s_[pos_ + 1] : '\0';
            if (next == '.' || next == '-' || next == '=' || next == '#' || next == ':')
                dynamic_bond();
            else
                bracket_atom();
        } else if (std::isalpha(c)) {
            organic_atom();
        } else {
            throw SyntaxError(pos_, std::string("unknown token '") + c + "'");
        }
    }

    void organic_atom() {
        size_t start = pos_;
        std::string sym(1, s_[pos_]);
        if ((s_[pos_] == 'C' || s_[pos_] == 'B') && pos_ + 1 < s_.size()) {
            char two = s_[pos_ + 1];
            if ((s_[pos_] == 'C' && two == 'l') || (s_[pos_] == 'B' && two == 'r')) sym += two;
        }
        bool aromatic = std::islower(sym[0]);
        std::string lookup = sym;
        if (aromatic) lookup[0] = static_cast<char>(std::toupper(lookup[0]));
        int ei = element_index(lookup);
        if (ei < 0 || !element(ei).organic_subset)
            throw SyntaxError(start, "unknown token '" + sym + "'");
        if (aromatic && !element(ei).aromatic_capable)
            throw SyntaxError(start, "element cannot be aromatic: " + sym);
        pos_ += sym.size();
        Atom a;
        a.element = ei;
        a.aromatic = aromatic;
        add_atom(a, start);
    }

    void bracket_atom() {
        size_t start = pos_;
        ++pos_;  // '['
        Atom a;
        // isotope
        if (pos_ < s_.size() && std::isdigit(s_[pos_])) a.isotope = read_int();
        // element symbol, longest match against the registry
        if (pos_ >= s_.size() || !std::isalpha(s_[pos_]))
            throw SyntaxError(pos_, "element symbol expected in brackets");
        std::string sym(1, s_[pos_]);
        if (pos_ + 1 < s_.size() && std::islower(s_[pos_ + 1]) && s_[pos_] != 'H') {
            std::string two = sym + s_[pos_ + 1];
            std::string norm = two;
            norm[0] = static_cast<char>(std::toupper(norm[0]));
            if (element_index(norm) >= 0) sym = two;
        }
        bool aromatic = std::islower(sym[0]);
        std::string lookup = sym;
        lookup[0] = static_cast<char>(std::toupper(lookup[0]));
        int ei = element_index(lookup);
        if (ei < 0) throw SyntaxError(pos_, "unknown element '" + sym + "'");
        if (aromatic && !element(ei).aromatic_capable)
            throw SyntaxError(pos_, "element cannot be aromatic: " + sym);
        a.element = ei;
        a.aromatic = aromatic;
        pos_ += sym.size();
        // explicit hydrogens
        a.explicit_h = 0;
        if (pos_ < s_.size() && s_[pos_] == 'H') {
            ++pos_;
            a.explicit_h = (pos_ < s_.size() && std::isdigit(s_[pos_])) ? read_int() : 1;
        }
        // charge, optionally dynamic: q1 '>' q2
        if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-' || s_[pos_] == '0')) {
            int q1 = read_charge();
            int q2 = q1;
            if (pos_ < s_.size() && s_[pos_] == '>') {
                ++pos_;
                if (pos_ >= s_.size() || !(s_[pos_] == '+' || s_[pos_] == '-' || s_[pos_] == '0'))
                    throw SyntaxError(pos_, "charge expected after '>'");
                q2 = read_charge();
            }
            if (std::abs(q1) > 4 || std::abs(q2) > 4)
                throw SyntaxError(start, "|charge| > 4");
            a.charge_before = q1;
            a.charge_after = q2;
        }
        // atom map
        if (pos_ < s_.size() && s_[pos_] == ':') {
            ++pos_;
            if (pos_ >= s_.size() || !std::isdigit(s_[pos_]))
                throw SyntaxError(pos_, "map index expected after ':'");
            a.map_index = read_int();
        }
        if (pos_ >= s_.size() || s_[pos_] != ']')
            throw SyntaxError(pos_, "']' expected");
        ++pos_;
        add_atom(a, start);
    }

    void dynamic_bond() {
        size_t start = pos_;
        if (pending_) throw SyntaxError(start, "two consecutive bond tokens");
        ++pos_;  // '['
        auto b1 = bond_from_char(s_[pos_]);
        ++pos_;
        if (pos_ >= s_.size() || s_[pos_] != '>')
            throw SyntaxError(pos_, "'>' expected in dynamic bond");
        ++pos_;
        if (pos_ >= s_.size()) throw SyntaxError(pos_, "unterminated dynamic bond");
        auto b2 = bond_from_char(s_[pos_]);
        if (!b2) throw SyntaxError(pos_, "bond order expected in dynamic bond");
        ++pos_;
        if (pos_ >= s_.size() || s_[pos_] != ']')
            throw SyntaxError(pos_, "']' expected after dynamic bond");
        ++pos_;
        if (*b1 == BondOrder::None && *b2 == BondOrder::None)
            throw SyntaxError(start, "dynamic bond with no order on either side");
        pending_ = PendingBond{*b1, *b2};
    }

    void ring(int num) {
        auto it = open_rings_.find(num);
        if (it == open_rings_.end()) {
            if (prev_ < 0) throw SyntaxError(pos_, "ring digit before any atom");
            open_rings_[num] = {prev_, pending_};
            pending_.reset();
        } else {
            auto [other, other_pending] = it->second;
            open_rings_.erase(it);
            if (other == prev_) throw SyntaxError(pos_, "ring bond to self");
            PendingBond order;
            if (pending_ && other_pending) {
                if (*pending_ != *other_pending)
                    throw SyntaxError(pos_, "conflicting ring bond orders");
                order = *pending_;
            } else if (pending_ || other_pending) {
                order = pending_ ? *pending_ : *other_pending;
            } else {
                order = default_bond(other, prev_);
            }
            pending_.reset();
            add_bond(other, prev_, order);
        }
    }

    PendingBond default_bond(int a, int b) const {
        bool arom = g_.atoms[static_cast<size_t>(a)].aromatic &&
                    g_.atoms[static_cast<size_t>(b)].aromatic;
        BondOrder o = arom ? BondOrder::Aromatic : BondOrder::Single;
        return {o, o};
    }

    void add_atom(Atom a, size_t at) {
        int idx = static_cast<int>(g_.atoms.size());
        g_.atoms.push_back(a);
        if (prev_ >= 0) {
            PendingBond order = pending_ ? *pending_ : default_bond(prev_, idx);
            pending_.reset();
            add_bond(prev_, idx, order, at);
        } else if (pending_) {
            throw SyntaxError(at, "bond with no left atom");
        }
        prev_ = idx;
    }

    void add_bond(int a, int b, PendingBond order, size_t at = 0) {
        if (order.first == BondOrder::None && order.second == BondOrder::None)
            throw SyntaxError(at ? at : pos_, "bond with no order on either side");
        auto key = std::minmax(a, b);
        if (!bonded_.insert(key).second)
            throw SyntaxError(at ? at : pos_, "duplicate bond between atoms");
        g_.bonds.push_back({a, b, order.first, order.second});
    }

    int read_int() {
        int v = 0;
        while (pos_ < s_.size() && std::isdigit(s_[pos_])) {
            v = v * 10 + (s_[pos_] - '0');
            ++pos_;
        }
        return v;
    }

    // '+', '++', '+2', '-', '--', '-3', '0'
    int read_charge() {
        char sign = s_[pos_];
        if (sign == '0') {
            ++pos_;
            return 0;
        }
        ++pos_;
        int mag = 1;
        if (pos_ < s_.size() && std::isdigit(s_[pos_])) {
            mag = read_int();
        } else {
            while (pos_ < s_.size() && s_[pos_] == sign) {
                ++mag;
                ++pos_;
            }
        }
        return sign == '+' ? mag : -mag;
    }

    const std::string& s_;
    size_t pos_ = 0;
    CgrGraph g_;
    int prev_ = -1;
    std::optional<PendingBond> pending_;
    std::vector<int> branch_stack_;
    std::map<int, std::pair<int, std::optional<PendingBond>>> open_rings_;
    std::set<std::pair<int, int>> bonded_;
};

}  // namespace detail

inline CgrGraph parse_cgrsmiles(const std::string& text, size_t max_len = kDefaultMaxLen) {
    if (text.empty()) throw SyntaxError(0, "empty input");
    if (text.size() > max_len) throw LengthError(text.size(), max_len);
    return detail::Parser(text).run();
}

}  // namespace cgr::chem
