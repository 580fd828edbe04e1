#pragma once

#include "dlp/formula.hpp"

#include <memory>
#include <set>
#include <string>

namespace dlp {

// Program grammars of the four rule packs. `ter` is the terminal program; it
// only arises during execution and is rejected inside parsed input.
enum class program_kind {
    ter,
    assign,   // x := e            (wp, fodl, pl)
    seq,      // p ; q
    ifte,     // if f then p else q end          (wp)
    loop,     // while f do p end                (wp)
    test,     // f ?                             (fodl, pl)
    choice,   // p + q                           (fodl, pl)
    star,     // p *                             (fodl, pl)
    alloc,    // x := cons(e)                    (sl)
    load,     // x := [e]                        (sl)
    store_to, // [e] := e'                       (sl)
    dispose   // dispose(e)                      (sl)
};

class program {
public:
    program() : m_kind(program_kind::ter) {}

    static program ter();
    static program assign(std::string x, expr e);
    static program seq(program a, program b);
    static program ifte(formula c, program a, program b);
    static program loop(formula c, program body);
    static program test(formula c);
    static program choice(program a, program b);
    static program star(program a);
    static program alloc(std::string x, expr e);
    static program load(std::string x, expr e);
    static program store_to(expr addr, expr val);
    static program dispose(expr addr);

    program_kind kind() const { return m_kind; }
    bool is_ter() const { return m_kind == program_kind::ter; }
    const std::string& var() const { return m_var; }
    const expr& e0() const { return m_e1; }
    const expr& e1() const { return m_e2; }
    const formula& cond() const { return *m_cond; }
    const program& p0() const { return *m_a; }
    const program& p1() const { return *m_b; }

    void collect_vars(std::set<std::string>& out) const;
    std::set<std::string> vars() const;

    // Normalizes expressions and test formulas (revisit keys compare these).
    program normalized() const;
    program substitute(const std::map<std::string, poly>& theta) const;

    bool operator==(const program& p) const;
    bool operator!=(const program& p) const { return !(*this == p); }

    std::string to_string() const;

private:
    program_kind m_kind;
    std::string m_var;
    expr m_e1, m_e2;
    std::shared_ptr<const formula> m_cond;
    std::shared_ptr<const program> m_a, m_b;
};

} // namespace dlp
