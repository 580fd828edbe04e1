#include "dlp/parser.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace dlp {

const char* inst_name(inst_id id) {
    switch (id) {
    case inst_id::wp: return "wp";
    case inst_id::fodl: return "fodl";
    case inst_id::pl: return "pl";
    case inst_id::sl: return "sl";
    }
    return "?";
}

std::optional<inst_id> inst_from_name(const std::string& s) {
    if (s == "wp") return inst_id::wp;
    if (s == "fodl") return inst_id::fodl;
    if (s == "pl") return inst_id::pl;
    if (s == "sl") return inst_id::sl;
    return std::nullopt;
}

parser::parser(std::string text, const definitions* defs, bool reject_reserved)
    : m_text(std::move(text)), m_defs(defs), m_reject_reserved(reject_reserved) {
    lex();
}

void parser::fail(const std::string& what) const {
    size_t pos = m_i < m_toks.size() ? m_toks[m_i].pos : m_text.size();
    std::string near = m_text.substr(pos, 24);
    throw parse_error(what + " near '" + near + "'");
}

void parser::lex() {
    static const char* puncts[] = {"|->", "|-",  "|v", ":=", "<=", ">=", "&&", "||", "->",
                                   "**",  "(",  ")",  "{",  "}",  "[",  "]",  "<",  ">",
                                   "=",   "!",  "+",  "-",  "*",  "/",  ";",  ",",  ".",
                                   "?",   ":"};
    size_t i = 0;
    while (i < m_text.size()) {
        char c = m_text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '#') {
            while (i < m_text.size() && m_text[i] != '\n') ++i;
            continue;
        }
        token t;
        t.pos = i;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < m_text.size() && std::isdigit(static_cast<unsigned char>(m_text[j]))) ++j;
            t.text = m_text.substr(i, j - i);
            t.is_int = true;
            i = j;
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < m_text.size() && (std::isalnum(static_cast<unsigned char>(m_text[j])) ||
                                         m_text[j] == '_' || m_text[j] == '\''))
                ++j;
            t.text = m_text.substr(i, j - i);
            t.is_ident = true;
            if (m_reject_reserved && t.text[0] == '_')
                throw parse_error("identifier '" + t.text + "' uses the reserved '_' namespace");
            i = j;
        } else {
            bool matched = false;
            for (auto* p : puncts) {
                size_t n = std::string(p).size();
                if (m_text.compare(i, n, p) == 0) {
                    t.text = p;
                    i += n;
                    matched = true;
                    break;
                }
            }
            if (!matched) throw parse_error(std::string("stray character '") + c + "'");
        }
        m_toks.push_back(std::move(t));
    }
}

std::string parser::peek() const { return m_i < m_toks.size() ? m_toks[m_i].text : ""; }
bool parser::at_end() const { return m_i >= m_toks.size(); }

bool parser::eat(const std::string& tok) {
    if (m_i < m_toks.size() && !m_toks[m_i].is_ident && !m_toks[m_i].is_int &&
        m_toks[m_i].text == tok) {
        ++m_i;
        return true;
    }
    return false;
}

bool parser::eat_word(const std::string& w) {
    if (m_i < m_toks.size() && m_toks[m_i].is_ident && m_toks[m_i].text == w) {
        ++m_i;
        return true;
    }
    return false;
}

void parser::expect(const std::string& tok) {
    if (!eat(tok) && !eat_word(tok)) fail("expected '" + tok + "'");
}

std::string parser::expect_ident() {
    if (m_i < m_toks.size() && m_toks[m_i].is_ident) return m_toks[m_i++].text;
    fail("expected identifier");
}

int64_t parser::expect_int() {
    bool negated = eat("-");
    if (m_i < m_toks.size() && m_toks[m_i].is_int) {
        int64_t v = std::stoll(m_toks[m_i++].text);
        return negated ? -v : v;
    }
    fail("expected integer");
}

// --- expressions -----------------------------------------------------------

static const char* keywords[] = {"true", "false", "if",   "then", "else",  "end", "while",
                                 "do",   "cons",  "dispose", "Suf", "first", "ter"};

static bool is_keyword(const std::string& s) {
    for (auto* k : keywords)
        if (s == k) return true;
    return false;
}

expr parser::parse_expr() {
    expr e = parse_term();
    for (;;) {
        if (eat("+"))
            e = expr::add(std::move(e), parse_term());
        else if (eat("-"))
            e = expr::sub(std::move(e), parse_term());
        else
            return e;
    }
}

expr parser::parse_term() {
    expr e = parse_factor();
    while (eat("*")) e = expr::mul(std::move(e), parse_factor());
    return e;
}

expr parser::parse_factor() {
    expr e;
    if (eat("-")) {
        e = expr::neg(parse_factor());
    } else if (m_i < m_toks.size() && m_toks[m_i].is_int) {
        e = expr::lit(std::stoll(m_toks[m_i++].text));
    } else if (m_i < m_toks.size() && m_toks[m_i].is_ident && !is_keyword(m_toks[m_i].text)) {
        e = expr::var(m_toks[m_i++].text);
    } else if (eat("(")) {
        e = parse_expr();
        expect(")");
    } else {
        fail("expected expression");
    }
    while (peek() == "/" && m_i + 1 < m_toks.size() && m_toks[m_i + 1].is_int) {
        eat("/");
        e = expr::divk(std::move(e), std::stoll(m_toks[m_i++].text));
    }
    return e;
}

// --- formulas ---------------------------------------------------------------

formula parser::parse_formula() { return parse_impl(); }

formula parser::parse_impl() {
    formula f = parse_or();
    if (eat("->")) return formula::impl(std::move(f), parse_impl());
    return f;
}

formula parser::parse_or() {
    formula f = parse_and();
    while (eat("||")) f = formula::disj(std::move(f), parse_and());
    return f;
}

formula parser::parse_and() {
    formula f = parse_suf();
    while (eat("&&")) f = formula::conj(std::move(f), parse_suf());
    return f;
}

formula parser::parse_suf() {
    formula f = parse_sep();
    if (eat_word("Suf")) return formula::suffix(std::move(f), parse_suf());
    return f;
}

formula parser::parse_sep() {
    formula f = parse_unary();
    while (eat("**")) f = formula::sep(std::move(f), parse_unary());
    return f;
}

std::optional<formula> parser::try_atom() {
    size_t save = m_i;
    try {
        expr a = parse_expr();
        cmp_op op;
        if (eat("="))
            op = cmp_op::eq;
        else if (eat("<="))
            op = cmp_op::le;
        else if (eat(">="))
            op = cmp_op::ge;
        else if (eat("<"))
            op = cmp_op::lt;
        else if (eat(">"))
            op = cmp_op::gt;
        else if (eat("|->"))
            return formula::points_to(std::move(a), parse_expr());
        else {
            m_i = save;
            return std::nullopt;
        }
        return formula::cmp(std::move(a), op, parse_expr());
    } catch (parse_error&) {
        m_i = save;
        return std::nullopt;
    }
}

formula parser::parse_unary() {
    if (eat_word("true")) return formula::bool_lit(true);
    if (eat_word("false")) return formula::bool_lit(false);
    if (eat("!")) return formula::neg(parse_unary());
    if (eat_word("first")) return formula::tfirst(parse_unary());
    if (eat("[")) {
        program p = parse_program();
        expect("]");
        return formula::box(std::move(p), parse_unary());
    }
    if (eat("<")) {
        program p = parse_program();
        expect(">");
        return formula::dia(std::move(p), parse_unary());
    }
    if (auto a = try_atom()) return *a;
    if (eat("(")) {
        formula f = parse_formula();
        expect(")");
        return f;
    }
    if (m_i < m_toks.size() && m_toks[m_i].is_ident && m_defs) {
        auto it = m_defs->formulas.find(m_toks[m_i].text);
        if (it != m_defs->formulas.end()) {
            ++m_i;
            return it->second;
        }
    }
    fail("expected formula");
}

// --- programs ----------------------------------------------------------------

program parser::parse_program() { return parse_choice(); }

program parser::parse_choice() {
    program p = parse_seq();
    while (eat("+")) p = program::choice(std::move(p), parse_seq());
    return p;
}

program parser::parse_seq() {
    program p = parse_postfix();
    if (eat(";")) return program::seq(std::move(p), parse_seq());
    return p;
}

program parser::parse_postfix() {
    program p = parse_prim();
    while (eat("*")) p = program::star(std::move(p));
    return p;
}

program parser::parse_prim() {
    if (eat_word("if")) {
        formula c = parse_formula();
        expect("then");
        program a = parse_program();
        expect("else");
        program b = parse_program();
        expect("end");
        return program::ifte(std::move(c), std::move(a), std::move(b));
    }
    if (eat_word("while")) {
        formula c = parse_formula();
        expect("do");
        program a = parse_program();
        expect("end");
        return program::loop(std::move(c), std::move(a));
    }
    if (eat_word("dispose")) {
        expect("(");
        expr e = parse_expr();
        expect(")");
        return program::dispose(std::move(e));
    }
    if (eat_word("ter")) return program::ter();
    // [e] := e'
    if (peek() == "[") {
        size_t save = m_i;
        try {
            eat("[");
            expr addr = parse_expr();
            expect("]");
            expect(":=");
            expr val = parse_expr();
            return program::store_to(std::move(addr), std::move(val));
        } catch (parse_error&) {
            m_i = save;
        }
    }
    // x := ...
    if (m_i < m_toks.size() && m_toks[m_i].is_ident && !is_keyword(m_toks[m_i].text) &&
        m_i + 1 < m_toks.size() && m_toks[m_i + 1].text == ":=") {
        std::string x = m_toks[m_i].text;
        m_i += 2;
        if (eat_word("cons")) {
            expect("(");
            expr e = parse_expr();
            expect(")");
            return program::alloc(std::move(x), std::move(e));
        }
        if (peek() == "[") {
            eat("[");
            expr e = parse_expr();
            expect("]");
            return program::load(std::move(x), std::move(e));
        }
        return program::assign(std::move(x), parse_expr());
    }
    // named program reference; a test headed by a defined program name must
    // be parenthesized
    if (m_i < m_toks.size() && m_toks[m_i].is_ident && m_defs &&
        m_defs->programs.count(m_toks[m_i].text)) {
        std::string next = m_i + 1 < m_toks.size() ? m_toks[m_i + 1].text : "";
        if (next != "?") return m_defs->programs.at(m_toks[m_i++].text);
    }
    // parenthesized program (backtracks to a test over a parenthesized formula)
    if (peek() == "(") {
        size_t save = m_i;
        try {
            eat("(");
            program p = parse_program();
            expect(")");
            if (eat("?")) {
                // "(...)?" parsed as program then '?': only legal when the
                // inside was really a formula; fall through to the test path.
                m_i = save;
            } else {
                return p;
            }
        } catch (parse_error&) {
            m_i = save;
        }
    }
    // test: formula '?'
    {
        size_t save = m_i;
        try {
            formula c = parse_formula();
            expect("?");
            return program::test(std::move(c));
        } catch (parse_error&) {
            m_i = save;
        }
    }
    fail("expected program");
}

// --- labels ------------------------------------------------------------------

store parser::parse_store() {
    expect("{");
    std::vector<std::pair<std::string, poly>> entries;
    if (!eat("}")) {
        do {
            std::string x = expect_ident();
            expect("->");
            entries.emplace_back(x, to_poly(parse_expr()));
        } while (eat(","));
        expect("}");
    }
    return store(std::move(entries));
}

std::map<int64_t, int64_t> parser::parse_heap() {
    expect("{");
    std::map<int64_t, int64_t> h;
    if (!eat("}")) {
        do {
            int64_t a = expect_int();
            expect("->");
            h[a] = expect_int();
        } while (eat(","));
        expect("}");
    }
    return h;
}

label parser::parse_label() {
    if (peek() == "(") {
        eat("(");
        store s = parse_store();
        expect(",");
        std::map<int64_t, int64_t> h = parse_heap();
        expect(")");
        store_heap sh;
        for (auto& [x, e] : s.entries()) {
            if (!e.is_constant() || !e.constant_value().is_integer())
                fail("store-heap labels must be ground");
            sh.vars[x] = e.constant_value().num();
        }
        sh.heap = std::move(h);
        return label(std::move(sh));
    }
    if (peek() == "{") {
        store_seq seq;
        seq.elems.push_back(parse_store());
        while (eat(".")) seq.elems.push_back(parse_store());
        if (seq.elems.size() == 1) return label(seq.elems[0]);
        return label(std::move(seq));
    }
    if (m_i < m_toks.size() && m_toks[m_i].is_ident && m_defs &&
        m_defs->labels.count(m_toks[m_i].text)) {
        label l = m_defs->labels.at(m_toks[m_i].text);
        ++m_i;
        if (!eat(".")) return l;
        // named store extended into a sequence: sigma . {x -> 0} . tau
        store_seq seq;
        if (l.is_store())
            seq.elems.push_back(l.as_store());
        else if (l.is_seq())
            seq = l.as_seq();
        else
            fail("cannot extend a store-heap label");
        do {
            if (peek() == "{") {
                seq.elems.push_back(parse_store());
            } else {
                std::string n = expect_ident();
                auto it = m_defs->labels.find(n);
                if (it == m_defs->labels.end() || !it->second.is_store())
                    fail("unknown store name '" + n + "'");
                seq.elems.push_back(it->second.as_store());
            }
        } while (eat("."));
        return label(std::move(seq));
    }
    fail("expected label");
}

labeled_formula parser::parse_labeled_formula() {
    size_t save = m_i;
    if (peek() == "{" || peek() == "(" ||
        (m_i < m_toks.size() && m_toks[m_i].is_ident && m_defs &&
         m_defs->labels.count(m_toks[m_i].text))) {
        try {
            label l = parse_label();
            expect(":");
            return labeled_formula::labeled(std::move(l), parse_formula());
        } catch (parse_error&) {
            m_i = save;
        }
    }
    // bare formula sugar: empty-store label
    formula f = parse_formula();
    return labeled_formula::labeled(label(store{}), std::move(f));
}

sequent parser::parse_sequent() {
    sequent s;
    if (!eat("|-")) {
        do {
            s.left.push_back(parse_labeled_formula());
        } while (eat(","));
        expect("|-");
    }
    // The right side may be empty and a sequent may sit inside a larger
    // stream (script parameters), so each item backtracks cleanly.
    size_t save = m_i;
    try {
        s.right.push_back(parse_labeled_formula());
    } catch (parse_error&) {
        m_i = save;
        return s;
    }
    for (;;) {
        save = m_i;
        if (!eat(",")) break;
        try {
            s.right.push_back(parse_labeled_formula());
        } catch (parse_error&) {
            m_i = save;
            break;
        }
    }
    return s;
}

substitution parser::parse_substitution() {
    expect("[");
    substitution theta;
    if (!eat("]")) {
        do {
            expr e = parse_expr();
            expect("/");
            std::string x = expect_ident();
            theta.set(x, to_poly(e));
        } while (eat(","));
        expect("]");
    }
    return theta;
}

std::pair<std::pair<program, label>, std::pair<program, label>> parser::parse_transition_all() {
    expect("(");
    program a = parse_program();
    expect(",");
    label l = parse_label();
    expect(")");
    expect("->");
    expect("(");
    program b = parse_program();
    expect(",");
    label l2 = parse_label();
    expect(")");
    if (!at_end()) fail("trailing input");
    return {{std::move(a), std::move(l)}, {std::move(b), std::move(l2)}};
}

#define ALL(weaker)                                                                                \
    auto r = weaker();                                                                             \
    if (!at_end()) fail("trailing input");                                                         \
    return r

expr parser::parse_expr_all() { ALL(parse_expr); }
formula parser::parse_formula_all() { ALL(parse_formula); }
program parser::parse_program_all() { ALL(parse_program); }
label parser::parse_label_all() { ALL(parse_label); }
labeled_formula parser::parse_labeled_formula_all() { ALL(parse_labeled_formula); }
sequent parser::parse_sequent_all() { ALL(parse_sequent); }
substitution parser::parse_substitution_all() { ALL(parse_substitution); }

#undef ALL

// --- instantiation checks ------------------------------------------------------

void check_instantiation(inst_id id, const formula& f) {
    switch (f.kind()) {
    case formula_kind::cmp:
    case formula_kind::bool_lit: return;
    case formula_kind::points_to:
        if (id != inst_id::sl) throw parse_error("points-to atom outside separation logic");
        return;
    case formula_kind::sep:
        if (id != inst_id::sl) throw parse_error("** outside separation logic");
        check_instantiation(id, f.arg0());
        check_instantiation(id, f.arg1());
        return;
    case formula_kind::tfirst:
        if (id != inst_id::pl) throw parse_error("'first' outside process logic");
        check_instantiation(id, f.arg0());
        return;
    case formula_kind::suffix:
        if (id != inst_id::pl) throw parse_error("'Suf' outside process logic");
        check_instantiation(id, f.arg0());
        check_instantiation(id, f.arg1());
        return;
    case formula_kind::neg: check_instantiation(id, f.arg0()); return;
    case formula_kind::box:
    case formula_kind::dia:
        check_instantiation(id, f.prog());
        check_instantiation(id, f.arg0());
        return;
    default:
        check_instantiation(id, f.arg0());
        check_instantiation(id, f.arg1());
        return;
    }
}

void check_instantiation(inst_id id, const program& p) {
    switch (p.kind()) {
    case program_kind::ter: return;
    case program_kind::assign:
        if (id == inst_id::sl) throw parse_error("plain assignment outside wp/fodl/pl");
        return;
    case program_kind::seq:
        check_instantiation(id, p.p0());
        check_instantiation(id, p.p1());
        return;
    case program_kind::ifte:
        if (id != inst_id::wp) throw parse_error("if-then-else outside while programs");
        if (p.cond().is_dynamic()) throw parse_error("test formulas must be non-dynamic");
        check_instantiation(id, p.cond());
        check_instantiation(id, p.p0());
        check_instantiation(id, p.p1());
        return;
    case program_kind::loop:
        if (id != inst_id::wp) throw parse_error("while outside while programs");
        if (p.cond().is_dynamic()) throw parse_error("test formulas must be non-dynamic");
        check_instantiation(id, p.cond());
        check_instantiation(id, p.p0());
        return;
    case program_kind::test:
        if (id != inst_id::fodl && id != inst_id::pl)
            throw parse_error("tests only exist in regular programs");
        if (p.cond().is_dynamic()) throw parse_error("test formulas must be non-dynamic");
        check_instantiation(id, p.cond());
        return;
    case program_kind::choice:
    case program_kind::star:
        if (id != inst_id::fodl && id != inst_id::pl)
            throw parse_error("choice/star only exist in regular programs");
        check_instantiation(id, p.p0());
        if (p.kind() == program_kind::choice) check_instantiation(id, p.p1());
        return;
    case program_kind::alloc:
    case program_kind::load:
    case program_kind::store_to:
    case program_kind::dispose:
        if (id != inst_id::sl) throw parse_error("heap statement outside separation logic");
        return;
    }
}

void check_instantiation(inst_id id, const label& l) {
    if (l.is_store() && id == inst_id::sl) throw parse_error("sl labels are store-heap pairs");
    if (l.is_seq() && id != inst_id::pl) throw parse_error("store sequences only exist in pl");
    if (l.is_heap() && id != inst_id::sl) throw parse_error("store-heap labels only exist in sl");
    if (l.is_store() && id == inst_id::pl) return; // a length-1 sequence
}

void check_instantiation(inst_id id, const sequent& s) {
    for (auto& fs : {s.left, s.right})
        for (auto& lf : fs) {
            if (lf.kind() == labeled_kind::labeled) {
                check_instantiation(id, lf.lab());
                check_instantiation(id, lf.fml());
            }
        }
}

// --- documents -----------------------------------------------------------------

static std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

input_document parse_document(const std::string& text) {
    input_document doc;
    std::istringstream is(text);
    std::string line;
    bool have_inst = false;
    std::string script_goal;
    std::vector<std::string>* script_lines = nullptr;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string raw = line;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = strip(line);
        if (line.empty()) continue;

        if (script_lines) {
            if (line == "end") {
                script_lines = nullptr;
            } else {
                script_lines->push_back(line);
            }
            continue;
        }

        auto err = [&](const std::string& what) {
            throw parse_error("line " + std::to_string(lineno) + ": " + what);
        };

        if (line.rfind("instantiation", 0) == 0) {
            parser p(line.substr(13));
            p.expect(":");
            auto id = inst_from_name(p.expect_ident());
            if (!id) err("unknown instantiation");
            doc.inst = *id;
            have_inst = true;
            continue;
        }
        if (!have_inst) err("missing 'instantiation:' header line");

        if (line.rfind("def", 0) == 0) {
            parser head(line.substr(3), &doc.defs, true);
            std::string kind = head.expect_ident();
            std::string name = head.expect_ident();
            head.expect(":=");
            if (doc.defs.programs.count(name) || doc.defs.formulas.count(name) ||
                doc.defs.labels.count(name))
                err("duplicate definition '" + name + "'");
            if (kind == "prog" || kind == "program") {
                program p = head.parse_program_all();
                check_instantiation(doc.inst, p);
                if (!p.is_ter()) doc.defs.programs.emplace(name, std::move(p));
            } else if (kind == "formula") {
                formula f = head.parse_formula_all();
                check_instantiation(doc.inst, f);
                doc.defs.formulas.emplace(name, std::move(f));
            } else if (kind == "label") {
                label l = head.parse_label_all();
                check_instantiation(doc.inst, l);
                doc.defs.labels.emplace(name, std::move(l));
            } else {
                err("unknown definition kind '" + kind + "'");
            }
            continue;
        }
        if (line.rfind("goal", 0) == 0) {
            parser head(line.substr(4), &doc.defs, true);
            std::string name = head.expect_ident();
            head.expect(":=");
            sequent s = head.parse_sequent_all();
            check_instantiation(doc.inst, s);
            for (auto& g : doc.goals)
                if (g.name == name) err("duplicate goal '" + name + "'");
            doc.goals.push_back({name, std::move(s)});
            continue;
        }
        if (line.rfind("eval", 0) == 0) {
            parser head(line.substr(4), &doc.defs, true);
            formula f = head.parse_formula_all();
            check_instantiation(doc.inst, f);
            doc.eval_formulas.push_back(std::move(f));
            continue;
        }
        if (line.rfind("option", 0) == 0) {
            parser head(line.substr(6), &doc.defs, true);
            std::string key = head.expect_ident();
            head.expect(":=");
            doc.options[key] = std::to_string(head.expect_int());
            continue;
        }
        if (line.rfind("script", 0) == 0) {
            parser head(line.substr(6));
            script_goal = head.expect_ident();
            head.expect(":");
            bool known = false;
            for (auto& g : doc.goals) known |= g.name == script_goal;
            if (!known) err("script for unknown goal '" + script_goal + "'");
            script_lines = &doc.scripts[script_goal];
            continue;
        }
        err("unrecognized directive");
    }
    if (script_lines) throw parse_error("unterminated script block");
    if (!have_inst) throw parse_error("missing 'instantiation:' header line");
    return doc;
}

input_document load_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_document(ss.str());
}

std::map<std::string, int64_t> parse_world_text(const std::string& text) {
    std::map<std::string, int64_t> w;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, ',')) {
        item = strip(item);
        if (item.empty()) continue;
        size_t eq = item.find('=');
        if (eq == std::string::npos) throw parse_error("world entries look like x=5");
        std::string name = strip(item.substr(0, eq));
        std::string val = strip(item.substr(eq + 1));
        w[name] = std::stoll(val);
    }
    return w;
}

} // namespace dlp
