// Formal iterated brackets: parsing, printing, and combinatorial analysis
// (lengths, letter sequences, basic sub-brackets, differentiation degrees,
// per-variable regularity demands and flow-segment counts).
#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace svlie {

class FormalBracket {
public:
    // A bracket is either a single indexed variable or a pair of brackets.
    static FormalBracket leaf(int index);
    static FormalBracket node(FormalBracket left, FormalBracket right);

    bool is_leaf() const { return node_->index > 0; }
    int index() const;             // leaf only
    FormalBracket left() const;    // node only
    FormalBracket right() const;   // node only

    int length() const { return node_->length; }
    // Variable indices in left-to-right order. Always a consecutive run.
    std::vector<int> seq() const;
    int min_index() const { return node_->min_index; }

    std::string str() const;  // canonical text, no whitespace

    bool operator==(const FormalBracket& other) const;

private:
    struct Node {
        int index = 0;  // > 0 for leaves
        int length = 1;
        int min_index = 0;
        std::shared_ptr<const Node> left, right;
    };
    explicit FormalBracket(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

// Grammar: B ::= "X"<digits> | "[" B "," B "]", whitespace ignored.
// Throws SyntaxError on malformed text and ConventionError when the
// letter sequence is not a run of consecutive indices.
FormalBracket parse_bracket(const std::string& text);

enum class PathStep { Left, Right };
using TreePath = std::vector<PathStep>;

FormalBracket sub_bracket(const FormalBracket& b, const TreePath& path);

// Differentiation degree of the sub-bracket addressed by `path`, by the
// defining recursion (0 at the root, +1 per tree level).
int sub_diff_degree(const FormalBracket& b, const TreePath& path);

// Same quantity read off the printed form: right brackets to the right of
// the sub-bracket minus left brackets to the right of it.
int sub_diff_degree_by_counting(const FormalBracket& b, const TreePath& path);

// Smoothness class of a single vector field: C^k or C^{k,1}.
struct RegularityClass {
    int k = 0;
    bool lipschitz_derivative = false;  // true for C^{k,1}
    std::string str() const;
    bool operator==(const RegularityClass&) const = default;
};

struct BracketAnalysis {
    int length = 0;
    std::vector<int> seq;
    int diff_degree = 0;
    // Basic sub-brackets in left-to-right position order; each variable
    // belongs to exactly one of them.
    std::vector<FormalBracket> basic_sub_brackets;
    std::map<int, int> var_degrees;                 // index -> degree
    std::map<int, RegularityClass> regularity;      // for the C^{B-1,1} tuple
    int segment_count = 0;                          // flow segments per unit word
};

BracketAnalysis analyze(const FormalBracket& b);

// Per-variable class making the tuple C^{B+k-1,1} (C^{B+k} semantics for
// length-1 brackets, where the class is plain C^k).
std::map<int, RegularityClass> tuple_regularity(const FormalBracket& b, int k);

// Slot of each variable: index (0-based) of the basic sub-bracket
// containing it, in left-to-right order.
std::map<int, int> basic_slot_of_var(const FormalBracket& b);

}  // namespace svlie
