#include "nbds/parser.hpp"

#include <cctype>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <vector>

namespace nbds {

namespace {

struct Token {
    enum class Kind { ident, number, op, end };
    Kind kind = Kind::end;
    std::string text;   // ident name or op char
    double value = 0.0; // number, scaled to SI
    std::string unit;   // raw unit suffix ("", "s", "A", ...)
    int line = 0;
    int col = 0;
};

std::optional<double> current_unit(const std::string& u) {
    if (u == "fA") return 1e-15;
    if (u == "pA") return 1e-12;
    if (u == "nA") return 1e-9;
    if (u == "uA") return 1e-6;
    if (u == "mA") return 1e-3;
    if (u == "A") return 1.0;
    return std::nullopt;
}

std::optional<double> time_unit(const std::string& u) {
    if (u == "s") return 1.0;
    if (u == "ms") return 1e-3;
    if (u == "us") return 1e-6;
    return std::nullopt;
}

class Lexer {
public:
    Lexer(const std::string& text, int line) : text_(text), line_(line) { advance(); }

    const Token& peek() const { return tok_; }

    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(line_, tok_.col, msg);
    }

private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        tok_ = Token{};
        tok_.line = line_;
        tok_.col = static_cast<int>(pos_) + 1;
        if (pos_ >= text_.size() || text_[pos_] == '#') {
            tok_.kind = Token::Kind::end;
            return;
        }
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && pos_ + 1 < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
            lex_number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            tok_.kind = Token::Kind::ident;
            tok_.text = text_.substr(start, pos_ - start);
            return;
        }
        if (std::string("+-*/()=").find(c) != std::string::npos) {
            tok_.kind = Token::Kind::op;
            tok_.text = std::string(1, c);
            ++pos_;
            return;
        }
        throw ParseError(line_, tok_.col, std::string("unexpected character '") + c + "'");
    }

    void lex_number() {
        size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
            ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            size_t mark = pos_ + 1;
            if (mark < text_.size() && (text_[mark] == '+' || text_[mark] == '-')) ++mark;
            if (mark < text_.size() && std::isdigit(static_cast<unsigned char>(text_[mark]))) {
                pos_ = mark;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
            }
        }
        tok_.kind = Token::Kind::number;
        tok_.value = std::strtod(text_.substr(start, pos_ - start).c_str(), nullptr);
        size_t ustart = pos_;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        tok_.unit = text_.substr(ustart, pos_ - ustart);
    }

    const std::string& text_;
    int line_;
    size_t pos_ = 0;
    Token tok_;
};

class ExprParser {
public:
    ExprParser(Lexer& lex, const DynSystem& sys) : lex_(lex), sys_(sys) {}

    ExprPtr parse() {
        ExprPtr e = expr();
        if (lex_.peek().kind != Token::Kind::end)
            lex_.fail("trailing tokens after expression");
        return e;
    }

private:
    double current_const() {
        if (lex_.peek().kind != Token::Kind::number)
            lex_.fail("expected a current constant");
        Token t = lex_.next();
        auto u = current_unit(t.unit);
        if (!u) throw ParseError(t.line, t.col, "expected a current unit (fA..A)");
        return t.value * *u;
    }

    ExprPtr expr() {
        ExprPtr e = term();
        while (lex_.peek().kind == Token::Kind::op &&
               (lex_.peek().text == "+" || lex_.peek().text == "-")) {
            const bool plus = lex_.next().text == "+";
            ExprPtr r = term();
            e = plus ? add(std::move(e), std::move(r)) : sub(std::move(e), std::move(r));
        }
        return e;
    }

    ExprPtr term() {
        ExprPtr e = factor();
        for (;;) {
            if (lex_.peek().kind != Token::Kind::op) return e;
            if (lex_.peek().text == "*") {
                lex_.next();
                ExprPtr r = factor();
                if (!(lex_.peek().kind == Token::Kind::op && lex_.peek().text == "/"))
                    throw ValidationError("product requires a scale current");
                lex_.next();
                e = mul(std::move(e), std::move(r), current_const());
            } else if (lex_.peek().text == "/") {
                lex_.next();
                e = div_const(std::move(e), current_const());
            } else {
                return e;
            }
        }
    }

    ExprPtr factor() {
        const Token& t = lex_.peek();
        if (t.kind == Token::Kind::op && t.text == "-") {
            lex_.next();
            ExprPtr inner = factor();
            if (inner->kind == Expr::Kind::constant) return constant(-inner->value);
            return neg(std::move(inner));
        }
        if (t.kind == Token::Kind::op && t.text == "(") {
            lex_.next();
            ExprPtr e = expr();
            expect_op(")");
            return e;
        }
        if (t.kind == Token::Kind::number) return constant(current_const());
        if (t.kind == Token::Kind::ident) {
            Token id = lex_.next();
            if (id.text == "sq" && lex_.peek().kind == Token::Kind::op &&
                lex_.peek().text == "(") {
                lex_.next();
                // The trailing "/ const" belongs to sq itself; expr() will
                // have absorbed it as a division, so take it back.
                ExprPtr e = expr();
                if (e->kind != Expr::Kind::div_const)
                    lex_.fail("sq needs a scale: sq(expr / const)");
                const double s = e->scale;
                ExprPtr inner = e->lhs;
                expect_op(")");
                return square(std::move(inner), s);
            }
            if (sys_.find_state(id.text)) return state_ref(id.text);
            if (sys_.find_input(id.text)) return input_ref(id.text);
            throw ValidationError("unresolved name '" + id.text + "'");
        }
        lex_.fail("expected a factor");
    }

    void expect_op(const std::string& op) {
        if (!(lex_.peek().kind == Token::Kind::op && lex_.peek().text == op))
            lex_.fail("expected '" + op + "'");
        lex_.next();
    }

    Lexer& lex_;
    const DynSystem& sys_;
};

double keyed_quantity(Lexer& lex, const std::string& key, bool is_time) {
    if (!(lex.peek().kind == Token::Kind::ident && lex.peek().text == key))
        lex.fail("expected '" + key + "='");
    lex.next();
    if (!(lex.peek().kind == Token::Kind::op && lex.peek().text == "="))
        lex.fail("expected '=' after '" + key + "'");
    lex.next();
    double sign = 1.0;
    if (lex.peek().kind == Token::Kind::op && lex.peek().text == "-") {
        lex.next();
        sign = -1.0;
    }
    if (lex.peek().kind != Token::Kind::number) lex.fail("expected a number for '" + key + "'");
    Token t = lex.next();
    auto u = is_time ? time_unit(t.unit) : current_unit(t.unit);
    if (!u)
        throw ParseError(t.line, t.col,
                         is_time ? "expected a time unit (s/ms/us)" : "expected a current unit");
    return sign * t.value * *u;
}

double plain_quantity(Lexer& lex, bool is_time, const char* what) {
    double sign = 1.0;
    if (lex.peek().kind == Token::Kind::op && lex.peek().text == "-") {
        lex.next();
        sign = -1.0;
    }
    if (lex.peek().kind != Token::Kind::number) lex.fail(std::string("expected ") + what);
    Token t = lex.next();
    auto u = is_time ? time_unit(t.unit) : current_unit(t.unit);
    if (!u)
        throw ParseError(t.line, t.col,
                         is_time ? "expected a time unit (s/ms/us)" : "expected a current unit");
    return sign * t.value * *u;
}

}  // namespace

DynSystem parse(const std::string& source) {
    DynSystem sys;
    bool saw_system = false;
    std::istringstream in(source);
    std::string raw;
    int lineno = 0;
    std::vector<std::pair<int, std::string>> eq_lines;  // parsed after all decls
    while (std::getline(in, raw)) {
        ++lineno;
        Lexer lex(raw, lineno);
        if (lex.peek().kind == Token::Kind::end) continue;
        if (lex.peek().kind != Token::Kind::ident) lex.fail("expected a directive");
        const std::string directive = lex.next().text;
        if (directive == "system") {
            if (lex.peek().kind != Token::Kind::ident) lex.fail("expected system name");
            sys.name = lex.next().text;
            while (lex.peek().kind == Token::Kind::op && lex.peek().text == "-") {
                lex.next();
                if (lex.peek().kind != Token::Kind::ident)
                    lex.fail("expected name fragment after '-'");
                sys.name += "-" + lex.next().text;
            }
            saw_system = true;
        } else if (directive == "regime") {
            if (lex.peek().kind != Token::Kind::ident) lex.fail("expected regime name");
            const std::string r = lex.next().text;
            if (r == "subthreshold")
                sys.regime = Regime::subthreshold;
            else if (r == "strong_inversion")
                sys.regime = Regime::strong_inversion;
            else
                lex.fail("unknown regime '" + r + "'");
            sys.device.regime = sys.regime;
        } else if (directive == "state") {
            if (lex.peek().kind != Token::Kind::ident) lex.fail("expected state name");
            StateDecl s;
            s.name = lex.next().text;
            s.tau = keyed_quantity(lex, "tau", true);
            s.i_dc = keyed_quantity(lex, "idc", false);
            s.init = keyed_quantity(lex, "init", false);
            sys.states.push_back(std::move(s));
        } else if (directive == "input") {
            if (lex.peek().kind != Token::Kind::ident) lex.fail("expected input name");
            InputDecl i;
            i.name = lex.next().text;
            if (lex.peek().kind != Token::Kind::ident) lex.fail("expected drive kind");
            const std::string kind = lex.next().text;
            auto& d = i.drive;
            if (kind == "constant") {
                d.kind = DriveSpec::Kind::constant;
                d.amplitude = plain_quantity(lex, false, "amplitude");
            } else if (kind == "step") {
                d.kind = DriveSpec::Kind::step;
                d.t0 = plain_quantity(lex, true, "start time");
                d.amplitude = plain_quantity(lex, false, "amplitude");
            } else if (kind == "pulse") {
                d.kind = DriveSpec::Kind::pulse;
                d.t0 = plain_quantity(lex, true, "start time");
                d.width = plain_quantity(lex, true, "width");
                d.amplitude = plain_quantity(lex, false, "amplitude");
            } else if (kind == "ramp") {
                d.kind = DriveSpec::Kind::ramp;
                d.rate = plain_quantity(lex, false, "rate (A per second)");
            } else if (kind == "pwl") {
                d.kind = DriveSpec::Kind::pwl;
                while (lex.peek().kind != Token::Kind::end) {
                    const double t = plain_quantity(lex, true, "pwl time");
                    const double a = plain_quantity(lex, false, "pwl amplitude");
                    d.points.emplace_back(t, a);
                }
            } else {
                lex.fail("unknown drive kind '" + kind + "'");
            }
            sys.inputs.push_back(std::move(i));
        } else if (directive == "eq") {
            eq_lines.emplace_back(lineno, raw);
        } else {
            lex.fail("unknown directive '" + directive + "'");
        }
    }
    if (!saw_system) throw ParseError(1, 1, "empty input: no 'system' directive");
    for (const auto& [ln, text] : eq_lines) {
        Lexer lex(text, ln);
        lex.next();  // 'eq'
        if (lex.peek().kind != Token::Kind::ident) lex.fail("expected state name");
        const std::string state = lex.next().text;
        if (!(lex.peek().kind == Token::Kind::op && lex.peek().text == "="))
            lex.fail("expected '='");
        lex.next();
        if (sys.equations.count(state))
            throw ValidationError("duplicate equation for state '" + state + "'");
        sys.equations[state] = ExprParser(lex, sys).parse();
    }
    sys.validate();
    return sys;
}

ExprPtr parse_expr(const std::string& source, const DynSystem& sys) {
    Lexer lex(source, 1);
    return ExprParser(lex, sys).parse();
}

}  // namespace nbds
