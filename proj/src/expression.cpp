#include "contraction/expression.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdlib>

namespace contraction {

struct ExprNode {
    enum class Kind { Literal, Variable, Negate, Binary, Call, Piecewise };

    Kind kind{};
    double literal = 0.0;
    std::string name;  // Variable
    int slot = -1;     // Variable, resolved by bound()
    BinaryOp op{};
    Builtin builtin{};
    Comparison cmp{};
    // Negate: {operand}; Binary: {lhs, rhs}; Call: args;
    // Piecewise: {cmp_lhs, cmp_rhs, then, else}.
    std::vector<ExprNode> children;
};

namespace {

// ---------------------------------------------------------------- lexer

enum class TokKind {
    Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma,
    Lt, Le, Eq, Ge, Gt, KwIf, KwThen, KwElse, KwMin, KwMax, KwAbs, End
};

struct Token {
    TokKind kind;
    std::size_t pos;      // 0-based offset
    double number = 0.0;
    std::string text;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return ident_start(c) || std::isdigit(static_cast<unsigned char>(c)); }

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    const std::size_t n = src.size();
    while (i < n) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
        const std::size_t start = i;
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
            while (i < n && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
            if (i < n && src[i] == '.') {
                ++i;
                while (i < n && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
            }
            if (i < n && (src[i] == 'e' || src[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < n && (src[j] == '+' || src[j] == '-')) ++j;
                if (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) {
                    i = j;
                    while (i < n && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
                }
            }
            double value = 0.0;
            const auto res = std::from_chars(src.data() + start, src.data() + i, value);
            if (res.ec != std::errc{})
                throw ParseError("malformed number", start);
            out.push_back({TokKind::Number, start, value, std::string(src.substr(start, i - start))});
            continue;
        }
        if (ident_start(c)) {
            while (i < n && ident_char(src[i])) ++i;
            std::string word(src.substr(start, i - start));
            TokKind k = TokKind::Ident;
            if (word == "if") k = TokKind::KwIf;
            else if (word == "then") k = TokKind::KwThen;
            else if (word == "else") k = TokKind::KwElse;
            else if (word == "min") k = TokKind::KwMin;
            else if (word == "max") k = TokKind::KwMax;
            else if (word == "abs") k = TokKind::KwAbs;
            out.push_back({k, start, 0.0, std::move(word)});
            continue;
        }
        auto single = [&](TokKind k) { out.push_back({k, start, 0.0, std::string(1, c)}); ++i; };
        switch (c) {
            case '+': single(TokKind::Plus); break;
            case '-': single(TokKind::Minus); break;
            case '*': single(TokKind::Star); break;
            case '/': single(TokKind::Slash); break;
            case '^': single(TokKind::Caret); break;
            case '(': single(TokKind::LParen); break;
            case ')': single(TokKind::RParen); break;
            case ',': single(TokKind::Comma); break;
            case '<':
                if (i + 1 < n && src[i + 1] == '=') { out.push_back({TokKind::Le, start, 0.0, "<="}); i += 2; }
                else single(TokKind::Lt);
                break;
            case '>':
                if (i + 1 < n && src[i + 1] == '=') { out.push_back({TokKind::Ge, start, 0.0, ">="}); i += 2; }
                else single(TokKind::Gt);
                break;
            case '=':
                if (i + 1 < n && src[i + 1] == '=') { out.push_back({TokKind::Eq, start, 0.0, "=="}); i += 2; }
                else single(TokKind::Eq);
                break;
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", start);
        }
    }
    out.push_back({TokKind::End, n, 0.0, ""});
    return out;
}

// --------------------------------------------------------------- parser

class Parser {
public:
    explicit Parser(std::string_view src) : tokens_(lex(src)) {}

    ExprNode parse_all() {
        ExprNode e = expression();
        expect(TokKind::End, "end of input");
        return e;
    }

private:
    std::vector<Token> tokens_;
    std::size_t cursor_ = 0;

    const Token& peek() const { return tokens_[cursor_]; }
    const Token& advance() { return tokens_[cursor_++]; }
    bool accept(TokKind k) {
        if (peek().kind == k) { ++cursor_; return true; }
        return false;
    }
    void expect(TokKind k, const char* what) {
        if (!accept(k))
            throw ParseError(std::string("expected ") + what, peek().pos);
    }

    ExprNode expression() {
        if (peek().kind == TokKind::KwIf) return piecewise();
        return additive();
    }

    ExprNode piecewise() {
        expect(TokKind::KwIf, "'if'");
        ExprNode lhs = additive();
        Comparison cmp;
        switch (peek().kind) {
            case TokKind::Lt: cmp = Comparison::Lt; break;
            case TokKind::Le: cmp = Comparison::Le; break;
            case TokKind::Eq: cmp = Comparison::Eq; break;
            case TokKind::Ge: cmp = Comparison::Ge; break;
            case TokKind::Gt: cmp = Comparison::Gt; break;
            default: throw ParseError("expected comparison operator", peek().pos);
        }
        advance();
        ExprNode rhs = additive();
        expect(TokKind::KwThen, "'then'");
        ExprNode then_branch = expression();
        expect(TokKind::KwElse, "'else'");
        ExprNode else_branch = expression();
        ExprNode node;
        node.kind = ExprNode::Kind::Piecewise;
        node.cmp = cmp;
        node.children = {std::move(lhs), std::move(rhs), std::move(then_branch), std::move(else_branch)};
        return node;
    }

    ExprNode additive() {
        ExprNode lhs = multiplicative();
        for (;;) {
            BinaryOp op;
            if (accept(TokKind::Plus)) op = BinaryOp::Add;
            else if (accept(TokKind::Minus)) op = BinaryOp::Sub;
            else break;
            ExprNode rhs = multiplicative();
            lhs = make_binary(op, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    ExprNode multiplicative() {
        ExprNode lhs = unary();
        for (;;) {
            BinaryOp op;
            if (accept(TokKind::Star)) op = BinaryOp::Mul;
            else if (accept(TokKind::Slash)) op = BinaryOp::Div;
            else break;
            ExprNode rhs = unary();
            lhs = make_binary(op, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    ExprNode unary() {
        if (accept(TokKind::Minus)) {
            ExprNode node;
            node.kind = ExprNode::Kind::Negate;
            node.children.push_back(unary());
            return node;
        }
        return power();
    }

    ExprNode power() {
        ExprNode base = primary();
        if (accept(TokKind::Caret)) {
            ExprNode exponent = unary();  // right-associative, exponent may carry unary minus
            return make_binary(BinaryOp::Pow, std::move(base), std::move(exponent));
        }
        return base;
    }

    ExprNode primary() {
        const Token& t = peek();
        switch (t.kind) {
            case TokKind::Number: {
                advance();
                ExprNode node;
                node.kind = ExprNode::Kind::Literal;
                node.literal = t.number;
                return node;
            }
            case TokKind::Ident: {
                advance();
                ExprNode node;
                node.kind = ExprNode::Kind::Variable;
                node.name = t.text;
                return node;
            }
            case TokKind::KwMin: return call(Builtin::Min, 2);
            case TokKind::KwMax: return call(Builtin::Max, 2);
            case TokKind::KwAbs: return call(Builtin::Abs, 1);
            case TokKind::LParen: {
                advance();
                ExprNode inner = expression();
                expect(TokKind::RParen, "')'");
                return inner;
            }
            default:
                throw ParseError("expected expression", t.pos);
        }
    }

    ExprNode call(Builtin fn, int arity) {
        advance();  // keyword
        expect(TokKind::LParen, "'('");
        ExprNode node;
        node.kind = ExprNode::Kind::Call;
        node.builtin = fn;
        node.children.push_back(expression());
        for (int k = 1; k < arity; ++k) {
            expect(TokKind::Comma, "','");
            node.children.push_back(expression());
        }
        expect(TokKind::RParen, "')'");
        return node;
    }

    static ExprNode make_binary(BinaryOp op, ExprNode lhs, ExprNode rhs) {
        ExprNode node;
        node.kind = ExprNode::Kind::Binary;
        node.op = op;
        node.children = {std::move(lhs), std::move(rhs)};
        return node;
    }
};

// ----------------------------------------------------------- utilities

void collect_variables(const ExprNode& node, std::vector<std::string>& out) {
    if (node.kind == ExprNode::Kind::Variable) {
        if (std::find(out.begin(), out.end(), node.name) == out.end()) out.push_back(node.name);
    }
    for (const ExprNode& child : node.children) collect_variables(child, out);
}

ExprNode bind_slots(const ExprNode& node, std::span<const std::string> variables) {
    ExprNode copy = node;
    if (copy.kind == ExprNode::Kind::Variable) {
        const auto it = std::find(variables.begin(), variables.end(), copy.name);
        if (it == variables.end())
            throw std::invalid_argument("unknown identifier '" + copy.name + "'");
        copy.slot = static_cast<int>(it - variables.begin());
    }
    for (std::size_t i = 0; i < copy.children.size(); ++i)
        copy.children[i] = bind_slots(node.children[i], variables);
    return copy;
}

ExprNode substitute(const ExprNode& node, const std::string& name, double value) {
    if (node.kind == ExprNode::Kind::Variable && node.name == name) {
        ExprNode lit;
        lit.kind = ExprNode::Kind::Literal;
        lit.literal = value;
        return lit;
    }
    ExprNode copy = node;
    for (std::size_t i = 0; i < copy.children.size(); ++i)
        copy.children[i] = substitute(node.children[i], name, value);
    return copy;
}

bool structurally_equal(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case ExprNode::Kind::Literal:
            if (!(a.literal == b.literal ||
                  (std::isnan(a.literal) && std::isnan(b.literal)))) return false;
            break;
        case ExprNode::Kind::Variable:
            if (a.name != b.name) return false;
            break;
        case ExprNode::Kind::Binary:
            if (a.op != b.op) return false;
            break;
        case ExprNode::Kind::Call:
            if (a.builtin != b.builtin) return false;
            break;
        case ExprNode::Kind::Piecewise:
            if (a.cmp != b.cmp) return false;
            break;
        case ExprNode::Kind::Negate:
            break;
    }
    if (a.children.size() != b.children.size()) return false;
    for (std::size_t i = 0; i < a.children.size(); ++i)
        if (!structurally_equal(a.children[i], b.children[i])) return false;
    return true;
}

double eval_node(const ExprNode& node, std::span<const double> env) {
    switch (node.kind) {
        case ExprNode::Kind::Literal:
            return node.literal;
        case ExprNode::Kind::Variable:
            if (node.slot < 0 || static_cast<std::size_t>(node.slot) >= env.size())
                throw std::logic_error("expression evaluated before binding variable '" + node.name + "'");
            return env[static_cast<std::size_t>(node.slot)];
        case ExprNode::Kind::Negate:
            return -eval_node(node.children[0], env);
        case ExprNode::Kind::Binary: {
            const double a = eval_node(node.children[0], env);
            const double b = eval_node(node.children[1], env);
            switch (node.op) {
                case BinaryOp::Add: return a + b;
                case BinaryOp::Sub: return a - b;
                case BinaryOp::Mul: return a * b;
                case BinaryOp::Div: return a / b;
                case BinaryOp::Pow: return std::pow(a, b);
            }
            return 0.0;
        }
        case ExprNode::Kind::Call: {
            const double a = eval_node(node.children[0], env);
            switch (node.builtin) {
                case Builtin::Abs: return std::fabs(a);
                case Builtin::Min: return std::fmin(a, eval_node(node.children[1], env));
                case Builtin::Max: return std::fmax(a, eval_node(node.children[1], env));
            }
            return 0.0;
        }
        case ExprNode::Kind::Piecewise: {
            const double a = eval_node(node.children[0], env);
            const double b = eval_node(node.children[1], env);
            bool taken = false;
            switch (node.cmp) {
                case Comparison::Lt: taken = a < b; break;
                case Comparison::Le: taken = a <= b; break;
                case Comparison::Eq: taken = a == b; break;  // 0 compares equal to -0
                case Comparison::Ge: taken = a >= b; break;
                case Comparison::Gt: taken = a > b; break;
            }
            return eval_node(taken ? node.children[2] : node.children[3], env);
        }
    }
    return 0.0;
}

// ---------------------------------------------------------- serializer

// Precedence levels used by the printer; higher binds tighter.
constexpr int kPrecIf = 0;
constexpr int kPrecAdd = 2;
constexpr int kPrecMul = 3;
constexpr int kPrecUnary = 4;
constexpr int kPrecPow = 5;
constexpr int kPrecAtom = 6;

int node_precedence(const ExprNode& node) {
    switch (node.kind) {
        case ExprNode::Kind::Piecewise: return kPrecIf;
        case ExprNode::Kind::Binary:
            switch (node.op) {
                case BinaryOp::Add:
                case BinaryOp::Sub: return kPrecAdd;
                case BinaryOp::Mul:
                case BinaryOp::Div: return kPrecMul;
                case BinaryOp::Pow: return kPrecPow;
            }
            return kPrecAtom;
        case ExprNode::Kind::Negate: return kPrecUnary;
        default: return kPrecAtom;
    }
}

std::string format_literal(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

const char* comparison_text(Comparison c) {
    switch (c) {
        case Comparison::Lt: return "<";
        case Comparison::Le: return "<=";
        case Comparison::Eq: return "=";
        case Comparison::Ge: return ">=";
        case Comparison::Gt: return ">";
    }
    return "?";
}

void print_node(const ExprNode& node, int parent_prec, std::string& out) {
    const int prec = node_precedence(node);
    const bool parens = prec < parent_prec;
    if (parens) out += '(';
    switch (node.kind) {
        case ExprNode::Kind::Literal:
            if (node.literal < 0) {
                // negative literals re-parse as Negate(Literal); print via abs
                out += '-';
                out += format_literal(-node.literal);
            } else {
                out += format_literal(node.literal);
            }
            break;
        case ExprNode::Kind::Variable:
            out += node.name;
            break;
        case ExprNode::Kind::Negate:
            out += '-';
            print_node(node.children[0], kPrecUnary, out);
            break;
        case ExprNode::Kind::Binary: {
            const char* sym = "?";
            switch (node.op) {
                case BinaryOp::Add: sym = " + "; break;
                case BinaryOp::Sub: sym = " - "; break;
                case BinaryOp::Mul: sym = "*"; break;
                case BinaryOp::Div: sym = "/"; break;
                case BinaryOp::Pow: sym = "^"; break;
            }
            if (node.op == BinaryOp::Pow) {
                print_node(node.children[0], prec + 1, out);
                out += sym;
                print_node(node.children[1], prec, out);
            } else {
                print_node(node.children[0], prec, out);
                out += sym;
                print_node(node.children[1], prec + 1, out);
            }
            break;
        }
        case ExprNode::Kind::Call:
            out += (node.builtin == Builtin::Min ? "min" : node.builtin == Builtin::Max ? "max" : "abs");
            out += '(';
            for (std::size_t i = 0; i < node.children.size(); ++i) {
                if (i) out += ", ";
                print_node(node.children[i], kPrecIf, out);
            }
            out += ')';
            break;
        case ExprNode::Kind::Piecewise:
            out += "if ";
            print_node(node.children[0], kPrecAdd, out);
            out += ' ';
            out += comparison_text(node.cmp);
            out += ' ';
            print_node(node.children[1], kPrecAdd, out);
            out += " then ";
            print_node(node.children[2], kPrecIf, out);
            out += " else ";
            print_node(node.children[3], kPrecIf, out);
            break;
    }
    if (parens) out += ')';
}

}  // namespace

// ------------------------------------------------------- class methods

Expression Expression::parse(std::string_view source) {
    if (source.empty() || source.find_first_not_of(" \t\r\n") == std::string_view::npos)
        throw ParseError("empty expression", 0);
    Parser parser(source);
    return Expression(std::make_shared<const ExprNode>(parser.parse_all()));
}

Expression Expression::parse(std::string_view source, std::span<const std::string> variables) {
    Expression e = parse(source);
    return e.bound(variables);
}

std::vector<std::string> Expression::variables() const {
    std::vector<std::string> out;
    if (root_) collect_variables(*root_, out);
    return out;
}

Expression Expression::bound(std::span<const std::string> variables) const {
    if (!root_) throw std::logic_error("binding an empty expression");
    return Expression(std::make_shared<const ExprNode>(bind_slots(*root_, variables)));
}

Expression Expression::substituted(const std::string& name, double value) const {
    if (!root_) throw std::logic_error("substituting into an empty expression");
    return Expression(std::make_shared<const ExprNode>(substitute(*root_, name, value)));
}

double Expression::eval(std::span<const double> env) const {
    if (!root_) throw std::logic_error("evaluating an empty expression");
    return eval_node(*root_, env);
}

std::string Expression::to_string() const {
    if (!root_) return "";
    std::string out;
    print_node(*root_, kPrecIf, out);
    return out;
}

bool operator==(const Expression& a, const Expression& b) {
    if (a.root_ == b.root_) return true;
    if (!a.root_ || !b.root_) return false;
    return structurally_equal(*a.root_, *b.root_);
}

Expression parse_expression(std::string_view source) { return Expression::parse(source); }

}  // namespace contraction
