#include "probneed/parser.hpp"

#include <cctype>
#include <sstream>

namespace probneed {

const VarName& hole_name() {
    static VarName h{"_hole", 0};
    return h;
}

bool is_hole(const ExprPtr& e) {
    auto* v = e->get_if<Var>();
    return v && v->name == hole_name();
}

namespace {

enum class Tok {
    kIdent,    // lowercase identifier (possibly with #index)
    kCtor,     // uppercase identifier
    kLambda,   // '\'
    kDot, kLParen, kRParen, kEquals, kComma, kSemi, kLBrace, kRBrace,
    kArrow,    // ->
    kChoice,   // <+>
    kHole,     // [.]
    kLet, kIn, kCase, kOf, kSeq,
    kEnd,
};

struct Token {
    Tok kind;
    std::string text;
    std::uint32_t index = 0;
    int line = 1, col = 1;
};

class Lexer {
  public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

  private:
    void advance() {
        skip_ws();
        tok_ = Token{Tok::kEnd, "", 0, line_, col_};
        if (pos_ >= src_.size()) return;
        char c = src_[pos_];
        if (c == '\\') { single(Tok::kLambda, "\\"); return; }
        if (c == '.') { single(Tok::kDot, "."); return; }
        if (c == '(') { single(Tok::kLParen, "("); return; }
        if (c == ')') { single(Tok::kRParen, ")"); return; }
        if (c == '=') { single(Tok::kEquals, "="); return; }
        if (c == ',') { single(Tok::kComma, ","); return; }
        if (c == ';') { single(Tok::kSemi, ";"); return; }
        if (c == '{') { single(Tok::kLBrace, "{"); return; }
        if (c == '}') { single(Tok::kRBrace, "}"); return; }
        if (src_.compare(pos_, 3, "[.]") == 0) { tok_.kind = Tok::kHole; tok_.text = "[.]"; bump(3); return; }
        if (src_.compare(pos_, 3, "<+>") == 0) { tok_.kind = Tok::kChoice; tok_.text = "<+>"; bump(3); return; }
        if (src_.compare(pos_, 2, "->") == 0) { tok_.kind = Tok::kArrow; tok_.text = "->"; bump(2); return; }
        if (std::isalpha((unsigned char)c)) {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum((unsigned char)src_[pos_]) || src_[pos_] == '_'))
                bump(1);
            std::string word = src_.substr(start, pos_ - start);
            std::uint32_t idx = 0;
            if (pos_ < src_.size() && src_[pos_] == '#') {
                bump(1);
                std::size_t ns = pos_;
                while (pos_ < src_.size() && std::isdigit((unsigned char)src_[pos_])) bump(1);
                if (ns == pos_) throw ParseError("expected digits after '#'", line_, col_);
                idx = (std::uint32_t)std::stoul(src_.substr(ns, pos_ - ns));
            }
            if (word == "let") tok_.kind = Tok::kLet;
            else if (word == "in") tok_.kind = Tok::kIn;
            else if (word == "case") tok_.kind = Tok::kCase;
            else if (word == "of") tok_.kind = Tok::kOf;
            else if (word == "seq") tok_.kind = Tok::kSeq;
            else if (std::isupper((unsigned char)word[0])) tok_.kind = Tok::kCtor;
            else tok_.kind = Tok::kIdent;
            tok_.text = word;
            tok_.index = idx;
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
    }

    void single(Tok k, const char* s) {
        tok_.kind = k;
        tok_.text = s;
        bump(1);
    }

    void bump(std::size_t n) {
        for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
            if (src_[pos_] == '\n') { ++line_; col_ = 1; }
            else ++col_;
            ++pos_;
        }
    }

    void skip_ws() {
        for (;;) {
            while (pos_ < src_.size() && std::isspace((unsigned char)src_[pos_])) bump(1);
            if (src_.compare(pos_, 2, "--") == 0) {
                while (pos_ < src_.size() && src_[pos_] != '\n') bump(1);
                continue;
            }
            break;
        }
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

class Parser {
  public:
    Parser(const std::string& src, const CtorTable& table, bool extended)
        : lex_(src), table_(table), extended_(extended) {}

    ExprPtr parse() {
        ExprPtr e = expr();
        if (lex_.peek().kind != Tok::kEnd)
            fail("unexpected trailing input '" + lex_.peek().text + "'");
        return e;
    }

  private:
    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError(msg, lex_.peek().line, lex_.peek().col);
    }

    void expect(Tok k, const char* what) {
        if (lex_.peek().kind != k) fail(std::string("expected ") + what);
        lex_.take();
    }

    ExprPtr expr() {
        switch (lex_.peek().kind) {
        case Tok::kLambda: return lambda();
        case Tok::kLet: return letexpr();
        case Tok::kCase: return caseexpr();
        default: break;
        }
        ExprPtr left = application();
        if (lex_.peek().kind == Tok::kChoice) {
            lex_.take();
            ExprPtr right = application();
            if (lex_.peek().kind == Tok::kChoice)
                fail("<+> is not associative; parenthesize nested choices");
            return mk_choice(std::move(left), std::move(right));
        }
        return left;
    }

    ExprPtr lambda() {
        lex_.take(); // '\'
        std::vector<VarName> binders;
        while (lex_.peek().kind == Tok::kIdent) {
            Token t = lex_.take();
            if (is_reserved_shorthand(t.text)) fail("'" + t.text + "' is reserved and cannot bind");
            binders.push_back({t.text, t.index});
        }
        if (binders.empty()) fail("expected binder after '\\'");
        expect(Tok::kDot, "'.' after binders");
        ExprPtr body = expr();
        for (auto it = binders.rbegin(); it != binders.rend(); ++it)
            body = mk_lam(*it, std::move(body));
        return body;
    }

    ExprPtr letexpr() {
        lex_.take(); // let
        std::vector<Binding> env;
        for (;;) {
            if (lex_.peek().kind != Tok::kIdent) fail("expected binder in let");
            Token t = lex_.take();
            if (is_reserved_shorthand(t.text)) fail("'" + t.text + "' is reserved and cannot bind");
            expect(Tok::kEquals, "'=' in let binding");
            ExprPtr rhs = expr();
            env.push_back({{t.text, t.index}, std::move(rhs)});
            if (lex_.peek().kind == Tok::kComma) { lex_.take(); continue; }
            break;
        }
        expect(Tok::kIn, "'in'");
        for (std::size_t i = 0; i < env.size(); ++i)
            for (std::size_t j = i + 1; j < env.size(); ++j)
                if (env[i].name == env[j].name)
                    fail("repeated let binder " + env[i].name.str());
        return mk_let(std::move(env), expr());
    }

    ExprPtr caseexpr() {
        if (!extended_) fail("case requires extended mode");
        lex_.take(); // case
        ExprPtr scrut = expr();
        expect(Tok::kOf, "'of'");
        expect(Tok::kLBrace, "'{'");
        std::vector<Alt> alts;
        for (;;) {
            if (lex_.peek().kind != Tok::kCtor) fail("expected constructor pattern");
            Token c = lex_.take();
            std::vector<VarName> binders;
            while (lex_.peek().kind == Tok::kIdent) {
                Token b = lex_.take();
                binders.push_back({b.text, b.index});
            }
            expect(Tok::kArrow, "'->'");
            alts.push_back({c.text, std::move(binders), expr()});
            if (lex_.peek().kind == Tok::kSemi) { lex_.take(); continue; }
            break;
        }
        expect(Tok::kRBrace, "'}'");
        const CtorInfo* info = table_.lookup(alts.front().ctor);
        if (!info) fail("unknown constructor " + alts.front().ctor);
        ExprPtr e = mk_case(info->type, std::move(scrut), std::move(alts));
        if (auto err = check_wellformed(e, table_)) fail(*err);
        return e;
    }

    bool is_reserved_shorthand(const std::string& w) const {
        return w == "id" || w == "K" || w == "K2" || w == "Bot" || w == "Omega";
    }

    ExprPtr shorthand(const std::string& w) {
        if (w == "id") return combinator_id();
        if (w == "K") return combinator_k();
        if (w == "K2") return combinator_k2();
        if (w == "Bot") return combinator_bot();
        if (w == "Omega") return combinator_omega();
        return nullptr;
    }

    ExprPtr application() {
        // seq is keyword-headed and consumes its two arguments as atoms
        ExprPtr head;
        if (lex_.peek().kind == Tok::kSeq) {
            if (!extended_) fail("seq requires extended mode");
            lex_.take();
            ExprPtr a = atom_or_fail("first argument of seq");
            ExprPtr b = atom_or_fail("second argument of seq");
            head = mk_seq(std::move(a), std::move(b));
        } else if (lex_.peek().kind == Tok::kCtor) {
            Token c = lex_.take();
            if (ExprPtr sh = shorthand(c.text)) {
                head = sh;
            } else {
                if (!extended_) fail("constructors require extended mode: " + c.text);
                const CtorInfo* info = table_.lookup(c.text);
                if (!info) fail("unknown constructor " + c.text);
                std::vector<ExprPtr> args;
                for (int i = 0; i < info->arity; ++i)
                    args.push_back(atom_or_fail(("argument of " + c.text).c_str()));
                head = mk_ctor(c.text, std::move(args));
            }
        } else {
            head = atom_or_fail("expression");
        }
        for (;;) {
            if (auto a = try_atom()) head = mk_app(std::move(head), std::move(*a));
            else break;
        }
        return head;
    }

    ExprPtr atom_or_fail(const char* what) {
        if (auto a = try_atom()) return *a;
        fail(std::string("expected ") + what);
    }

    std::optional<ExprPtr> try_atom() {
        const Token& t = lex_.peek();
        switch (t.kind) {
        case Tok::kIdent: {
            Token v = lex_.take();
            if (ExprPtr sh = shorthand(v.text)) return sh;
            return mk_var(VarName{v.text, v.index});
        }
        case Tok::kCtor: {
            Token c = lex_.take();
            if (ExprPtr sh = shorthand(c.text)) return sh;
            if (!extended_) fail("constructors require extended mode: " + c.text);
            const CtorInfo* info = table_.lookup(c.text);
            if (!info) fail("unknown constructor " + c.text);
            if (info->arity != 0)
                fail("constructor " + c.text + " must be saturated; parenthesize '(" + c.text + " ...)'");
            return mk_ctor(c.text, {});
        }
        case Tok::kHole:
            lex_.take();
            return mk_var(hole_name());
        case Tok::kLParen: {
            lex_.take();
            ExprPtr e = expr();
            expect(Tok::kRParen, "')'");
            return e;
        }
        default:
            return std::nullopt;
        }
    }

    Lexer lex_;
    const CtorTable& table_;
    bool extended_;
};

// precedence levels: 0 lam/let/case, 1 choice, 2 application/seq/ctor, 3 atom
void print_rec(const ExprPtr& e, int prec, std::string& out) {
    auto wrap = [&](int mine, auto&& body) {
        bool paren = prec > mine;
        if (paren) out += '(';
        body();
        if (paren) out += ')';
    };
    if (auto* v = e->get_if<Var>()) {
        out += (v->name == hole_name()) ? "[.]" : v->name.str();
    } else if (auto* l = e->get_if<Lam>()) {
        wrap(0, [&] {
            out += '\\';
            out += l->binder.str();
            out += '.';
            print_rec(l->body, 0, out);
        });
    } else if (auto* a = e->get_if<App>()) {
        wrap(2, [&] {
            print_rec(a->fun, 2, out);
            out += ' ';
            print_rec(a->arg, 3, out);
        });
    } else if (auto* c = e->get_if<Choice>()) {
        wrap(1, [&] {
            print_rec(c->left, 2, out);
            out += " <+> ";
            print_rec(c->right, 2, out);
        });
    } else if (auto* lt = e->get_if<Let>()) {
        wrap(0, [&] {
            out += "let ";
            bool first = true;
            for (auto& b : lt->env) {
                if (!first) out += ", ";
                first = false;
                out += b.name.str();
                out += '=';
                print_rec(b.rhs, 0, out);
            }
            out += " in ";
            print_rec(lt->body, 0, out);
        });
    } else if (auto* k = e->get_if<CtorApp>()) {
        if (k->args.empty()) {
            out += k->ctor;
        } else {
            wrap(2, [&] {
                out += k->ctor;
                for (auto& x : k->args) {
                    out += ' ';
                    print_rec(x, 3, out);
                }
            });
        }
    } else if (auto* cs = e->get_if<Case>()) {
        wrap(0, [&] {
            out += "case ";
            print_rec(cs->scrut, 1, out);
            out += " of {";
            bool first = true;
            for (auto& alt : cs->alts) {
                if (!first) out += "; ";
                first = false;
                out += alt.ctor;
                for (auto& b : alt.binders) {
                    out += ' ';
                    out += b.str();
                }
                out += " -> ";
                print_rec(alt.body, 0, out);
            }
            out += '}';
        });
    } else if (auto* sq = e->get_if<Seq>()) {
        wrap(2, [&] {
            out += "seq ";
            print_rec(sq->first, 3, out);
            out += ' ';
            print_rec(sq->second, 3, out);
        });
    }
}

} // namespace

ExprPtr parse_expr(const std::string& text, const CtorTable& table, bool extended) {
    Parser p(text, table, extended);
    ExprPtr e = p.parse();
    if (auto err = check_wellformed(e, table))
        throw ParseError(*err, 1, 1);
    return e;
}

ExprPtr parse_program(const std::string& text, const CtorTable& table, bool extended) {
    return freshen(parse_expr(text, table, extended), {});
}

std::string print_expr(const ExprPtr& e) {
    std::string out;
    print_rec(e, 0, out);
    return out;
}

} // namespace probneed
