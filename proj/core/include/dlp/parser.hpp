#pragma once

#include "dlp/inst.hpp"
#include "dlp/sequent.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dlp {

struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

// Named definitions available while parsing (programs, formulas, labels).
struct definitions {
    std::map<std::string, program> programs;
    std::map<std::string, formula> formulas;
    std::map<std::string, label> labels;
};

class parser {
public:
    parser(std::string text, const definitions* defs = nullptr, bool reject_reserved = false);

    expr parse_expr_all();
    formula parse_formula_all();
    program parse_program_all();
    label parse_label_all();
    labeled_formula parse_labeled_formula_all();
    sequent parse_sequent_all();
    substitution parse_substitution_all();

    // transition text: ( <prog> , <label> ) -> ( <prog> , <label> )
    std::pair<std::pair<program, label>, std::pair<program, label>> parse_transition_all();

    // exposed for the script reader
    expr parse_expr();
    formula parse_formula();
    program parse_program();
    label parse_label();
    labeled_formula parse_labeled_formula();
    sequent parse_sequent();
    substitution parse_substitution();
    std::map<int64_t, int64_t> parse_heap();
    bool at_end() const;
    bool eat_word(const std::string& w);
    std::string expect_ident();
    int64_t expect_int();
    void expect(const std::string& tok);
    bool eat(const std::string& tok);
    std::string peek() const;

private:
    struct token {
        std::string text;
        bool is_int = false;
        bool is_ident = false;
        size_t pos = 0;
    };
    std::vector<token> m_toks;
    size_t m_i = 0;
    std::string m_text;
    const definitions* m_defs;
    bool m_reject_reserved;

    [[noreturn]] void fail(const std::string& what) const;
    void lex();

    expr parse_term();
    expr parse_factor();
    formula parse_impl();
    formula parse_or();
    formula parse_and();
    formula parse_suf();
    formula parse_sep();
    formula parse_unary();
    std::optional<formula> try_atom();
    program parse_choice();
    program parse_seq();
    program parse_postfix();
    program parse_prim();
    store parse_store();
};

// Instantiation-foreign connectives and statements are rejected at parse
// time; this validates a parsed object against a pack.
void check_instantiation(inst_id id, const formula& f);
void check_instantiation(inst_id id, const program& p);
void check_instantiation(inst_id id, const label& l);
void check_instantiation(inst_id id, const sequent& s);

// ---------------------------------------------------------------------------
// Input documents: instantiation header, named definitions, goals, options,
// optional embedded proof scripts.
// ---------------------------------------------------------------------------

struct input_goal {
    std::string name;
    sequent seq;
};

struct input_document {
    inst_id inst = inst_id::wp;
    definitions defs;
    std::vector<input_goal> goals;
    std::vector<formula> eval_formulas;                       // cmd_exec checks
    std::map<std::string, std::vector<std::string>> scripts;  // goal -> lines
    std::map<std::string, std::string> options;
};

input_document parse_document(const std::string& text);
input_document load_document(const std::string& path);

// "n=5,s=0"
std::map<std::string, int64_t> parse_world_text(const std::string& text);

} // namespace dlp
