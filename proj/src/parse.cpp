#include "twderham/parse.hpp"

#include <cctype>

namespace twd {

namespace {

struct Token {
    enum class Kind { Number, Name, Op, End };
    Kind kind = Kind::End;
    std::string text;
    int line = 1, col = 1;
};

class Lexer {
  public:
    explicit Lexer(const std::string& s) : s_(s) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

  private:
    void advance() {
        while (pos_ < s_.size() && isspace(static_cast<unsigned char>(s_[pos_]))) bump();
        tok_ = Token{};
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= s_.size()) {
            tok_.kind = Token::Kind::End;
            return;
        }
        char c = s_[pos_];
        if (isdigit(static_cast<unsigned char>(c))) {
            tok_.kind = Token::Kind::Number;
            while (pos_ < s_.size() && isdigit(static_cast<unsigned char>(s_[pos_]))) {
                tok_.text.push_back(s_[pos_]);
                bump();
            }
            return;
        }
        if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
            tok_.kind = Token::Kind::Name;
            while (pos_ < s_.size() && (isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
                tok_.text.push_back(s_[pos_]);
                bump();
            }
            return;
        }
        if (std::string("+-*/^()").find(c) != std::string::npos) {
            tok_.kind = Token::Kind::Op;
            tok_.text.push_back(c);
            bump();
            return;
        }
        fail("ParseError", std::string("unexpected character '") + c + "' at line " +
                               std::to_string(line_) + ", column " + std::to_string(col_));
    }

    void bump() {
        if (s_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& s_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

[[noreturn]] void parse_fail(const Token& t, const std::string& msg) {
    fail("ParseError", msg + " at line " + std::to_string(t.line) + ", column " +
                           std::to_string(t.col));
}

struct Value {
    Form form;
    bool is_integer_literal = false;
    mpz_class literal;
};

class Parser {
  public:
    Parser(const RingSpec& spec, const std::string& text, const std::vector<std::string>& names)
        : spec_(spec), names_(names), lex_(text) {}

    Form parse() {
        Value v = parse_expr();
        if (lex_.peek().kind != Token::Kind::End)
            parse_fail(lex_.peek(), "unexpected trailing input");
        return v.form;
    }

  private:
    int nvars() const { return static_cast<int>(names_.size()); }

    int find_var(const std::string& name) const {
        for (size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return static_cast<int>(i);
        return -1;
    }

    Value parse_expr() {
        Value acc = parse_term();
        while (lex_.peek().kind == Token::Kind::Op &&
               (lex_.peek().text == "+" || lex_.peek().text == "-")) {
            Token op = lex_.take();
            Value rhs = parse_term();
            acc.form = op.text == "+" ? acc.form + rhs.form : acc.form - rhs.form;
            acc.is_integer_literal = false;
        }
        return acc;
    }

    Value parse_term() {
        Value acc = parse_unary();
        while (lex_.peek().kind == Token::Kind::Op &&
               (lex_.peek().text == "*" || lex_.peek().text == "/")) {
            Token op = lex_.take();
            Value rhs = parse_unary();
            if (op.text == "*") {
                acc.form = wedge(acc.form, rhs.form);
            } else {
                Poly divisor = as_constant_poly(rhs, op);
                RingElement c = divisor.constant_term();
                if (!c.is_unit())
                    parse_fail(op, "divisor " + c.str() + " is not a unit in " + spec_.str());
                acc.form = acc.form.scaled(c.inverse());
            }
            acc.is_integer_literal = false;
        }
        return acc;
    }

    Value parse_unary() {
        if (lex_.peek().kind == Token::Kind::Op &&
            (lex_.peek().text == "-" || lex_.peek().text == "+")) {
            Token op = lex_.take();
            Value v = parse_unary();
            if (op.text == "-") {
                v.form = -v.form;
                v.is_integer_literal = false;
            }
            return v;
        }
        return parse_power();
    }

    Value parse_power() {
        Value base = parse_atom();
        while (lex_.peek().kind == Token::Kind::Op && lex_.peek().text == "^") {
            Token op = lex_.take();
            Value rhs = parse_atom();
            bool base_has_degree = !base.form.is_homogeneous(0);
            bool rhs_has_degree = !rhs.form.is_homogeneous(0);
            if (base_has_degree || rhs_has_degree) {
                base.form = wedge(base.form, rhs.form);
                base.is_integer_literal = false;
                continue;
            }
            if (!rhs.is_integer_literal || rhs.literal < 0)
                parse_fail(op, "exponent must be a nonnegative integer literal");
            if (rhs.literal > 64) parse_fail(op, "exponent too large");
            Poly p = base.form.component(0);
            base.form = Form::from_poly(p.pow(static_cast<int>(rhs.literal.get_si())));
            base.is_integer_literal = false;
        }
        return base;
    }

    Value parse_atom() {
        Token t = lex_.take();
        Value v{Form(spec_, nvars()), false, 0};
        switch (t.kind) {
            case Token::Kind::Number: {
                mpz_class z(t.text);
                v.form = Form::from_poly(Poly::constant(spec_, nvars(), spec_.from_mpz(z)));
                v.is_integer_literal = true;
                v.literal = z;
                return v;
            }
            case Token::Kind::Name: {
                int idx = find_var(t.text);
                if (idx >= 0) {
                    v.form = Form::from_poly(Poly::variable(spec_, nvars(), idx));
                    return v;
                }
                if (t.text.size() > 1 && t.text[0] == 'd') {
                    int didx = find_var(t.text.substr(1));
                    if (didx >= 0) {
                        v.form = Form::differential(spec_, nvars(), didx);
                        return v;
                    }
                }
                parse_fail(t, "unknown variable '" + t.text + "'");
            }
            case Token::Kind::Op:
                if (t.text == "(") {
                    Value inner = parse_expr();
                    Token close = lex_.take();
                    if (close.kind != Token::Kind::Op || close.text != ")")
                        parse_fail(close, "expected ')'");
                    return inner;
                }
                parse_fail(t, "unexpected '" + t.text + "'");
            case Token::Kind::End: parse_fail(t, "unexpected end of input");
        }
        parse_fail(t, "unexpected token");
    }

    Poly as_constant_poly(const Value& v, const Token& at) {
        if (!v.form.is_homogeneous(0))
            parse_fail(at, "divisor must be a constant");
        Poly p = v.form.component(0);
        if (!p.is_constant()) parse_fail(at, "divisor must be a constant");
        return p;
    }

    const RingSpec& spec_;
    const std::vector<std::string>& names_;
    Lexer lex_;
};

}  // namespace

Form parse_form(const RingSpec& spec, const std::string& text,
                const std::vector<std::string>& var_names) {
    return Parser(spec, text, var_names).parse();
}

Poly parse_poly(const RingSpec& spec, const std::string& text,
                const std::vector<std::string>& var_names) {
    Form f = parse_form(spec, text, var_names);
    if (!f.is_homogeneous(0))
        fail("ParseError", "expected a polynomial, found differentials in '" + text + "'");
    return f.component(0);
}

}  // namespace twd
