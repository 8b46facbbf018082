#include "svlie/bracket.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "svlie/errors.hpp"

namespace svlie {

FormalBracket FormalBracket::leaf(int index) {
    if (index <= 0) throw SyntaxError("variable index must be a positive integer");
    auto n = std::make_shared<Node>();
    n->index = index;
    n->length = 1;
    n->min_index = index;
    return FormalBracket(std::move(n));
}

FormalBracket FormalBracket::node(FormalBracket left, FormalBracket right) {
    auto n = std::make_shared<Node>();
    n->length = left.length() + right.length();
    n->min_index = left.min_index();
    n->left = left.node_;
    n->right = right.node_;
    return FormalBracket(std::move(n));
}

int FormalBracket::index() const {
    if (!is_leaf()) throw InvalidPath("index() called on a non-leaf bracket");
    return node_->index;
}

FormalBracket FormalBracket::left() const {
    if (is_leaf()) throw InvalidPath("left() called on a leaf");
    return FormalBracket(node_->left);
}

FormalBracket FormalBracket::right() const {
    if (is_leaf()) throw InvalidPath("right() called on a leaf");
    return FormalBracket(node_->right);
}

std::vector<int> FormalBracket::seq() const {
    std::vector<int> out;
    out.reserve(static_cast<size_t>(length()));
    for (int j = min_index(); j < min_index() + length(); ++j) out.push_back(j);
    return out;
}

std::string FormalBracket::str() const {
    if (is_leaf()) return "X" + std::to_string(node_->index);
    FormalBracket l(node_->left), r(node_->right);
    return "[" + l.str() + "," + r.str() + "]";
}

bool FormalBracket::operator==(const FormalBracket& other) const {
    if (is_leaf() != other.is_leaf()) return false;
    if (is_leaf()) return node_->index == other.node_->index;
    return FormalBracket(node_->left) == FormalBracket(other.node_->left) &&
           FormalBracket(node_->right) == FormalBracket(other.node_->right);
}

namespace {

struct Parser {
    const std::string& text;
    size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    char peek() {
        skip_ws();
        if (pos >= text.size()) throw SyntaxError("unexpected end of bracket text");
        return text[pos];
    }

    void expect(char c) {
        if (peek() != c)
            throw SyntaxError(std::string("expected '") + c + "' at position " +
                              std::to_string(pos) + " in \"" + text + "\"");
        ++pos;
    }

    FormalBracket parse() {
        char c = peek();
        if (c == '[') {
            ++pos;
            FormalBracket l = parse();
            expect(',');
            FormalBracket r = parse();
            expect(']');
            return FormalBracket::node(std::move(l), std::move(r));
        }
        if (c == 'X' || c == 'x') {
            ++pos;
            size_t start = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (pos == start) throw SyntaxError("variable needs a numeric index, e.g. X3");
            int idx = 0;
            for (size_t i = start; i < pos; ++i) idx = idx * 10 + (text[i] - '0');
            return FormalBracket::leaf(idx);
        }
        throw SyntaxError(std::string("unexpected character '") + c + "' at position " +
                          std::to_string(pos));
    }
};

void collect_leaves(const FormalBracket& b, std::vector<int>& out) {
    if (b.is_leaf()) {
        out.push_back(b.index());
        return;
    }
    collect_leaves(b.left(), out);
    collect_leaves(b.right(), out);
}

}  // namespace

FormalBracket parse_bracket(const std::string& text) {
    Parser p{text};
    FormalBracket b = p.parse();
    p.skip_ws();
    if (p.pos != text.size())
        throw SyntaxError("trailing characters after bracket: \"" + text.substr(p.pos) + "\"");
    std::vector<int> leaves;
    collect_leaves(b, leaves);
    for (size_t i = 1; i < leaves.size(); ++i) {
        if (leaves[i] != leaves[i - 1] + 1)
            throw ConventionError("letter sequence of \"" + text +
                                  "\" is not a run of consecutive indices (X" +
                                  std::to_string(leaves[i - 1]) + " followed by X" +
                                  std::to_string(leaves[i]) + ")");
    }
    return b;
}

FormalBracket sub_bracket(const FormalBracket& b, const TreePath& path) {
    FormalBracket cur = b;
    for (PathStep s : path) {
        if (cur.is_leaf()) throw InvalidPath("path descends below a leaf");
        cur = (s == PathStep::Left) ? cur.left() : cur.right();
    }
    return cur;
}

int sub_diff_degree(const FormalBracket& b, const TreePath& path) {
    sub_bracket(b, path);  // validates
    return static_cast<int>(path.size());
}

int sub_diff_degree_by_counting(const FormalBracket& b, const TreePath& path) {
    sub_bracket(b, path);
    // Walk the printed form and count brackets strictly to the right of the
    // addressed sub-bracket's span.
    std::string printed = b.str();
    size_t begin = 0;
    FormalBracket cur = b;
    for (PathStep s : path) {
        // span of cur starts at `begin`; left child starts one past '[',
        // right child starts after left child's text plus the comma.
        size_t left_len = cur.left().str().size();
        if (s == PathStep::Left) {
            begin += 1;
            cur = cur.left();
        } else {
            begin += 1 + left_len + 1;
            cur = cur.right();
        }
    }
    size_t end = begin + cur.str().size();
    int rights = 0, lefts = 0;
    for (size_t i = end; i < printed.size(); ++i) {
        if (printed[i] == ']') ++rights;
        if (printed[i] == '[') ++lefts;
    }
    return rights - lefts;
}

std::string RegularityClass::str() const {
    if (lipschitz_derivative) return "C^{" + std::to_string(k) + ",1}";
    return "C^" + std::to_string(k);
}

namespace {

bool has_pair_sub_bracket(const FormalBracket& b, int lo, int hi) {
    // Does [X_lo, X_hi] occur as a sub-bracket of b?
    if (b.is_leaf()) return false;
    if (b.length() == 2 && b.left().index() == lo && b.right().index() == hi) return true;
    return has_pair_sub_bracket(b.left(), lo, hi) || has_pair_sub_bracket(b.right(), lo, hi);
}

void collect_basics(const FormalBracket& root, const FormalBracket& cur,
                    std::vector<FormalBracket>& out) {
    if (cur.length() <= 2) {
        if (cur.length() == 2) {
            out.push_back(cur);
            return;
        }
        int j = cur.index();
        if (!has_pair_sub_bracket(root, j - 1, j) && !has_pair_sub_bracket(root, j, j + 1))
            out.push_back(cur);
        return;
    }
    collect_basics(root, cur.left(), out);
    collect_basics(root, cur.right(), out);
}

void collect_var_degrees(const FormalBracket& b, int depth, std::map<int, int>& out) {
    if (b.is_leaf()) {
        out[b.index()] = depth;
        return;
    }
    collect_var_degrees(b.left(), depth + 1, out);
    collect_var_degrees(b.right(), depth + 1, out);
}

int segment_count_rec(const FormalBracket& b) {
    if (b.is_leaf()) return 1;
    return 2 * segment_count_rec(b.left()) + 2 * segment_count_rec(b.right());
}

}  // namespace

BracketAnalysis analyze(const FormalBracket& b) {
    BracketAnalysis a;
    a.length = b.length();
    a.seq = b.seq();
    collect_basics(b, b, a.basic_sub_brackets);
    a.diff_degree = static_cast<int>(a.basic_sub_brackets.size());
    collect_var_degrees(b, 0, a.var_degrees);
    a.regularity = tuple_regularity(b, 0);
    a.segment_count = segment_count_rec(b);
    return a;
}

std::map<int, RegularityClass> tuple_regularity(const FormalBracket& b, int k) {
    std::map<int, RegularityClass> out;
    if (b.length() == 1) {
        // C^{B+k}: the single field needs C^k; for k >= 1 the C^{B+k-1,1}
        // reading asks for C^{k-1,1}.
        RegularityClass c;
        if (k >= 1) {
            c.k = k - 1;
            c.lipschitz_derivative = true;
        } else {
            c.k = 0;
            c.lipschitz_derivative = false;
        }
        out[b.index()] = c;
        return out;
    }
    std::map<int, int> degs;
    collect_var_degrees(b, 0, degs);
    for (auto [j, d] : degs) out[j] = RegularityClass{d + k - 1, true};
    return out;
}

std::map<int, int> basic_slot_of_var(const FormalBracket& b) {
    std::vector<FormalBracket> basics;
    collect_basics(b, b, basics);
    std::map<int, int> out;
    for (size_t i = 0; i < basics.size(); ++i)
        for (int j : basics[i].seq()) out[j] = static_cast<int>(i);
    return out;
}

}  // namespace svlie
