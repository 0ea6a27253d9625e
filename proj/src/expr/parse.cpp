#include "boltzclass/expr/parse.hpp"

#include <cctype>
#include <vector>

namespace boltzclass {

namespace {

struct AbstractName {
    std::string base;
    int arity = 0;
    std::vector<int> slots;
};

// "Psi7", "Omega3_1_2" -> base/arity/slots; nullopt for anything else.
std::optional<AbstractName> split_abstract(std::string_view id) {
    for (std::string_view base : {"Psi", "Omega"}) {
        if (id.substr(0, base.size()) != base) continue;
        std::string_view rest = id.substr(base.size());
        std::size_t i = 0;
        while (i < rest.size() && std::isdigit(static_cast<unsigned char>(rest[i]))) ++i;
        if (i == 0) return std::nullopt;
        AbstractName out;
        out.base = std::string(base);
        out.arity = std::stoi(std::string(rest.substr(0, i)));
        while (i < rest.size()) {
            if (rest[i] != '_') return std::nullopt;
            ++i;
            std::size_t j = i;
            while (j < rest.size() && std::isdigit(static_cast<unsigned char>(rest[j]))) ++j;
            if (j == i) return std::nullopt;
            out.slots.push_back(std::stoi(std::string(rest.substr(i, j - i))));
            i = j;
        }
        return out;
    }
    return std::nullopt;
}

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    Expr run() {
        Expr e = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError("syntax error: " + msg, pos_); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool peek(char c) {
        skip_ws();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    bool accept(char c) {
        if (peek(c)) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    Expr expr() {
        std::vector<Expr> terms;
        terms.push_back(term());
        while (true) {
            if (accept('+')) {
                terms.push_back(term());
            } else if (accept('-')) {
                terms.push_back(-term());
            } else {
                break;
            }
        }
        return Expr::sum(std::move(terms));
    }

    Expr term() {
        Expr acc = factor();
        while (true) {
            if (accept('*')) {
                acc = acc * factor();
            } else if (peek('/')) {
                std::size_t at = pos_;
                ++pos_;
                Expr d = factor();
                if (d.is_zero()) throw ParseError("division by literal zero", at);
                acc = acc / d;
            } else {
                break;
            }
        }
        return acc;
    }

    Expr factor() {
        skip_ws();
        if (accept('-')) return -factor();
        Expr base = atom();
        if (accept('^')) {
            skip_ws();
            if (accept('(')) {
                Expr e = expr();
                expect(')');
                return pow(base, e);
            }
            bool neg = false;
            if (accept('-')) {
                neg = true;
            } else {
                accept('+');
            }
            skip_ws();
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) fail("expected integer or parenthesized exponent");
            std::int64_t n = std::stoll(std::string(s_.substr(start, pos_ - start)));
            return pow(base, Expr(neg ? -n : n));
        }
        return base;
    }

    Expr number() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        std::int64_t num = std::stoll(std::string(s_.substr(start, pos_ - start)));
        std::int64_t den = 1;
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                if (den > 100000000000000LL) fail("too many decimal digits");
                num = num * 10 + (s_[pos_] - '0');
                den *= 10;
                ++pos_;
            }
        }
        return Expr(Rational(num, den));
    }

    Expr atom() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            expect(')');
            return e;
        }
        if (c == '-') {
            ++pos_;
            return -atom();
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
                ++pos_;
            }
            std::string id(s_.substr(start, pos_ - start));
            if (!peek('(')) {
                if (split_abstract(id)) throw ParseError("arbitrary function " + id + " needs arguments", start);
                return Expr::symbol(id);
            }
            ++pos_;
            std::vector<Expr> args;
            args.push_back(expr());
            while (accept(',')) args.push_back(expr());
            expect(')');
            if (auto fn = builtin_from_name(id)) {
                if (args.size() != 1) throw ParseError(id + " takes exactly one argument", start);
                return Expr::call(*fn, args[0]);
            }
            if (auto an = split_abstract(id)) {
                if (static_cast<std::size_t>(an->arity) != args.size()) {
                    throw ParseError("arity mismatch: " + id + " expects " + std::to_string(an->arity) +
                                         " arguments, got " + std::to_string(args.size()),
                                     start);
                }
                for (int s : an->slots) {
                    if (s < 1 || s > an->arity) throw ParseError("partial slot out of range in " + id, start);
                }
                return Expr::partial(an->base, an->slots, std::move(args));
            }
            throw ParseError("unknown builtin '" + id + "'", start);
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).run(); }

}  // namespace boltzclass
