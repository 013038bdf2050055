#include "fmdiag/formula.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "fmdiag/error.hpp"

namespace fmdiag {

Formula Formula::atom(std::string feature, bool value) {
    Formula f;
    f.op = Op::Atom;
    f.feature = std::move(feature);
    f.value = value;
    return f;
}

Formula Formula::negation(Formula arg) {
    Formula f;
    f.op = Op::Not;
    f.args.push_back(std::move(arg));
    return f;
}

namespace {

Formula nary(Formula::Op op, std::vector<Formula> fs) {
    if (fs.size() == 1) return std::move(fs.front());
    Formula f;
    f.op = op;
    for (auto& g : fs) {
        if (g.op == op) {
            for (auto& h : g.args) f.args.push_back(std::move(h));
        } else {
            f.args.push_back(std::move(g));
        }
    }
    return f;
}

}  // namespace

Formula Formula::conjunction(std::vector<Formula> fs) { return nary(Op::And, std::move(fs)); }
Formula Formula::disjunction(std::vector<Formula> fs) { return nary(Op::Or, std::move(fs)); }

Formula Formula::implies(Formula lhs, Formula rhs) {
    Formula f;
    f.op = Op::Implies;
    f.args.push_back(std::move(lhs));
    f.args.push_back(std::move(rhs));
    return f;
}

Formula Formula::iff(Formula lhs, Formula rhs) {
    Formula f;
    f.op = Op::Iff;
    f.args.push_back(std::move(lhs));
    f.args.push_back(std::move(rhs));
    return f;
}

bool Formula::is_literal() const noexcept {
    if (op == Op::Atom) return true;
    return op == Op::Not && args.front().op == Op::Atom;
}

bool Formula::is_literal_conjunction() const noexcept {
    if (is_literal()) return true;
    if (op != Op::And) return false;
    return std::all_of(args.begin(), args.end(), [](const Formula& a) { return a.is_literal(); });
}

bool Formula::evaluate(const std::function<bool(const std::string&)>& lookup) const {
    switch (op) {
        case Op::Atom: return lookup(feature) == value;
        case Op::Not: return !args.front().evaluate(lookup);
        case Op::And:
            return std::all_of(args.begin(), args.end(),
                               [&](const Formula& a) { return a.evaluate(lookup); });
        case Op::Or:
            return std::any_of(args.begin(), args.end(),
                               [&](const Formula& a) { return a.evaluate(lookup); });
        case Op::Implies: return !args[0].evaluate(lookup) || args[1].evaluate(lookup);
        case Op::Iff: return args[0].evaluate(lookup) == args[1].evaluate(lookup);
    }
    return false;
}

std::vector<std::string> Formula::features() const {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    std::function<void(const Formula&)> walk = [&](const Formula& f) {
        if (f.op == Op::Atom) {
            if (seen.insert(f.feature).second) out.push_back(f.feature);
            return;
        }
        for (const auto& a : f.args) walk(a);
    };
    walk(*this);
    return out;
}

bool is_identifier_start(char c) noexcept {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_identifier_char(char c) noexcept {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '&';
}

bool is_valid_feature_name(std::string_view name) noexcept {
    if (name.empty() || !is_identifier_start(name.front())) return false;
    if (name.back() == '&') return false;
    return std::all_of(name.begin(), name.end(), is_identifier_char);
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { Ident, Eq, Not, And, Or, Implies, Iff, LParen, RParen, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t column;  // 1-based
};

class Lexer {
public:
    Lexer(std::string_view text, std::size_t line, std::size_t offset)
        : text_(text), line_(line), offset_(offset) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            const std::size_t col = offset_ + pos_ + 1;
            if (pos_ >= text_.size()) {
                out.push_back({Tok::End, "", col});
                return out;
            }
            const char c = text_[pos_];
            if (is_identifier_start(c)) {
                const std::size_t start = pos_++;
                while (pos_ < text_.size()) {
                    const char d = text_[pos_];
                    if (d == '&') {
                        // `&` belongs to the identifier only when glued to more of it.
                        if (pos_ + 1 < text_.size() && text_[pos_ + 1] != '&' &&
                            is_identifier_char(text_[pos_ + 1])) {
                            ++pos_;
                            continue;
                        }
                        break;
                    }
                    if (!is_identifier_char(d)) break;
                    ++pos_;
                }
                out.push_back({Tok::Ident, std::string(text_.substr(start, pos_ - start)), col});
                continue;
            }
            if (text_.substr(pos_, 3) == "<->") {
                out.push_back({Tok::Iff, "<->", col});
                pos_ += 3;
                continue;
            }
            if (text_.substr(pos_, 2) == "->") {
                out.push_back({Tok::Implies, "->", col});
                pos_ += 2;
                continue;
            }
            switch (c) {
                case '=': out.push_back({Tok::Eq, "=", col}); break;
                case '!': out.push_back({Tok::Not, "!", col}); break;
                case '&': out.push_back({Tok::And, "&", col}); break;
                case '|': out.push_back({Tok::Or, "|", col}); break;
                case '(': out.push_back({Tok::LParen, "(", col}); break;
                case ')': out.push_back({Tok::RParen, ")", col}); break;
                default:
                    throw ParseError(line_, col, std::string("unexpected character '") + c + "'");
            }
            ++pos_;
        }
    }

private:
    std::string_view text_;
    std::size_t line_;
    std::size_t offset_;
    std::size_t pos_ = 0;
};

class Parser {
public:
    Parser(std::vector<Token> toks, std::size_t line) : toks_(std::move(toks)), line_(line) {}

    Formula parse() {
        Formula f = parse_iff();
        if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
        return f;
    }

private:
    // Nesting cap keeps hostile inputs from exhausting the stack.
    static constexpr int kMaxDepth = 512;

    const Token& peek() const { return toks_[pos_]; }
    Token next() { return toks_[pos_++]; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(line_, peek().column, msg);
    }

    Formula parse_iff() {
        Formula lhs = parse_implies();
        while (peek().kind == Tok::Iff) {
            next();
            lhs = Formula::iff(std::move(lhs), parse_implies());
        }
        return lhs;
    }

    Formula parse_implies() {
        Formula lhs = parse_or();
        if (peek().kind == Tok::Implies) {
            next();
            return Formula::implies(std::move(lhs), parse_implies());
        }
        return lhs;
    }

    Formula parse_or() {
        std::vector<Formula> parts;
        parts.push_back(parse_and());
        while (peek().kind == Tok::Or) {
            next();
            parts.push_back(parse_and());
        }
        if (parts.size() == 1) return std::move(parts.front());
        Formula f;
        f.op = Formula::Op::Or;
        f.args = std::move(parts);
        return f;
    }

    Formula parse_and() {
        std::vector<Formula> parts;
        parts.push_back(parse_unary());
        while (peek().kind == Tok::And) {
            next();
            parts.push_back(parse_unary());
        }
        if (parts.size() == 1) return std::move(parts.front());
        Formula f;
        f.op = Formula::Op::And;
        f.args = std::move(parts);
        return f;
    }

    Formula parse_unary() {
        if (++depth_ > kMaxDepth) fail("expression nested too deeply");
        Formula out;
        if (peek().kind == Tok::Not) {
            next();
            out = Formula::negation(parse_unary());
        } else if (peek().kind == Tok::LParen) {
            next();
            out = parse_iff();
            if (peek().kind != Tok::RParen) fail("expected ')'");
            next();
        } else if (peek().kind == Tok::Ident) {
            Token name = next();
            bool value = true;
            if (peek().kind == Tok::Eq) {
                next();
                if (peek().kind != Tok::Ident || (peek().text != "t" && peek().text != "f"))
                    fail("expected 't' or 'f' after '='");
                value = next().text == "t";
            }
            out = Formula::atom(std::move(name.text), value);
        } else if (peek().kind == Tok::End) {
            fail("unexpected end of expression");
        } else {
            fail("unexpected '" + peek().text + "'");
        }
        --depth_;
        return out;
    }

    std::vector<Token> toks_;
    std::size_t line_;
    std::size_t pos_ = 0;
    int depth_ = 0;
};

int precedence(Formula::Op op) {
    switch (op) {
        case Formula::Op::Iff: return 1;
        case Formula::Op::Implies: return 2;
        case Formula::Op::Or: return 3;
        case Formula::Op::And: return 4;
        case Formula::Op::Not: return 5;
        case Formula::Op::Atom: return 6;
    }
    return 0;
}

std::string render(const Formula& f, bool display);

std::string render_child(const Formula& child, int parent_prec, bool parens_on_equal, bool display) {
    std::string s = render(child, display);
    const int p = precedence(child.op);
    if (p < parent_prec || (p == parent_prec && parens_on_equal)) return "(" + s + ")";
    return s;
}

std::string render(const Formula& f, bool display) {
    using Op = Formula::Op;
    switch (f.op) {
        case Op::Atom:
            if (display) return f.value ? f.feature : "!" + f.feature;
            return f.feature + (f.value ? "=t" : "=f");
        case Op::Not: return "!" + render_child(f.args[0], 5, false, display);
        case Op::And:
        case Op::Or: {
            const int p = precedence(f.op);
            std::string out;
            for (std::size_t i = 0; i < f.args.size(); ++i) {
                if (i) out += f.op == Op::And ? " & " : " | ";
                out += render_child(f.args[i], p, true, display);
            }
            return out;
        }
        case Op::Implies:
            return render_child(f.args[0], 2, true, display) + " -> " +
                   render_child(f.args[1], 2, false, display);
        case Op::Iff:
            return render_child(f.args[0], 1, false, display) + " <-> " +
                   render_child(f.args[1], 1, true, display);
    }
    return {};
}

}  // namespace

Formula parse_formula(std::string_view text, std::size_t line, std::size_t column_offset) {
    Lexer lexer(text, line, column_offset);
    Parser parser(lexer.run(), line);
    return parser.parse();
}

std::string to_string(const Formula& f) { return render(f, false); }
std::string to_display_string(const Formula& f) { return render(f, true); }

}  // namespace fmdiag
