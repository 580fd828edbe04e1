#include "dlp/script.hpp"

namespace dlp {

script_engine::script_engine(pack_context ctx, const definitions& defs, sequent root)
    : m_ctx(std::move(ctx)), m_defs(defs) {
    m_graph.set_inst(m_ctx.inst);
    m_graph.add_root(std::move(root));
}

void script_engine::run(const std::vector<std::string>& lines) {
    for (auto& l : lines) run_line(l);
}

void script_engine::run_line(const std::string& line) {
    parser p(line, &m_defs);
    if (p.at_end()) return;

    int goal = -1;
    if (p.eat_word("goal")) goal = static_cast<int>(p.expect_int());
    if (goal < 0) goal = m_graph.first_open();
    if (goal < 0) throw script_error("no open goal left for: " + line);

    auto parse_term_cert = [&]() -> std::optional<termination_certificate> {
        if (p.eat_word("variant"))
            return termination_certificate::variant(to_poly(p.parse_expr()));
        if (p.eat_word("unroll")) return termination_certificate::unroll(p.expect_int());
        return std::nullopt;
    };
    auto end_of_line = [&] {
        if (!p.at_end()) throw script_error("trailing input in: " + line);
    };

    try {
        if (p.eat_word("boxR")) {
            if (p.eat_word("split")) {
                end_of_line();
                guard_case_split(m_ctx, m_graph, goal);
                return;
            }
            end_of_line();
            m_graph.apply(m_ctx, goal, rule_id::box_r, {});
            return;
        }
        bool is_boxl = p.eat_word("boxL");
        if (is_boxl || p.eat_word("dia")) {
            bool left = is_boxl;
            rule_params rp;
            p.expect("via");
            p.expect("(");
            rp.via_prog = p.parse_program();
            p.expect(",");
            rp.via_label = p.parse_label();
            p.expect(")");
            p.expect("->");
            p.expect("(");
            rp.via_prog2 = p.parse_program();
            p.expect(",");
            rp.via_label2 = p.parse_label();
            p.expect(")");
            rp.term_cert = parse_term_cert();
            end_of_line();
            m_graph.apply(m_ctx, goal, left ? rule_id::box_l : rule_id::dia_step, rp);
            return;
        }
        bool is_boxter = p.eat_word("boxTer");
        if (is_boxter || p.eat_word("diaTer")) {
            bool dia = !is_boxter;
            rule_params rp;
            if (p.eat_word("left")) rp.side = "left";
            else if (p.eat_word("right")) rp.side = "right";
            end_of_line();
            m_graph.apply(m_ctx, goal, dia ? rule_id::dia_ter : rule_id::box_ter, rp);
            return;
        }
        if (p.eat_word("close")) {
            end_of_line();
            m_graph.apply(m_ctx, goal, rule_id::ter_close, {});
            return;
        }
        if (p.eat_word("ax")) {
            end_of_line();
            m_graph.apply(m_ctx, goal, rule_id::ax, {});
            return;
        }
        if (p.eat_word("cut")) {
            rule_params rp;
            rp.cut_formula = p.parse_labeled_formula();
            end_of_line();
            m_graph.apply(m_ctx, goal, rule_id::cut, rp);
            return;
        }
        if (p.eat_word("sub")) {
            p.expect("template");
            rule_params rp;
            rp.sub_template = p.parse_sequent();
            p.expect("under");
            rp.sub_theta = p.parse_substitution();
            end_of_line();
            m_graph.apply(m_ctx, goal, rule_id::sub, rp);
            return;
        }
        if (p.eat_word("backlink")) {
            p.expect("to");
            int companion = static_cast<int>(p.expect_int());
            std::optional<substitution> theta;
            if (p.eat_word("via")) theta = p.parse_substitution();
            end_of_line();
            m_graph.add_backlink(goal, companion, theta);
            return;
        }
        bool is_wkl = p.eat_word("wkL");
        if (is_wkl || p.eat_word("wkR")) {
            bool left = is_wkl;
            rule_params rp;
            rp.index = static_cast<int>(p.expect_int());
            end_of_line();
            m_graph.apply(m_ctx, goal, left ? rule_id::wk_l : rule_id::wk_r, rp);
            return;
        }
        if (p.eat_word("con")) {
            rule_params rp;
            if (p.eat_word("left")) rp.side = "left";
            else if (p.eat_word("right")) rp.side = "right";
            else throw script_error("con needs a side");
            rp.index = static_cast<int>(p.expect_int());
            end_of_line();
            m_graph.apply(m_ctx, goal, rule_id::con, rp);
            return;
        }
        static const std::pair<const char*, rule_id> plain[] = {
            {"negR", rule_id::neg_r}, {"negL", rule_id::neg_l}, {"andR", rule_id::and_r},
            {"andL", rule_id::and_l}, {"orL", rule_id::or_l},   {"orR", rule_id::or_r},
            {"impR", rule_id::imp_r}, {"impL", rule_id::imp_l}, {"slframe", rule_id::sl_frame},
            {"tfirst", rule_id::temp_first},  {"tsufR1", rule_id::temp_suf_r1},
            {"tsufR2", rule_id::temp_suf_r2}, {"tsufL", rule_id::temp_suf_l}};
        for (auto& [name, rid] : plain) {
            if (p.eat_word(name)) {
                rule_params rp;
                if (!p.at_end()) rp.index = static_cast<int>(p.expect_int());
                end_of_line();
                m_graph.apply(m_ctx, goal, rid, rp);
                return;
            }
        }
        if (p.eat_word("le")) {
            rule_params rp;
            rp.index = static_cast<int>(p.expect_int());
            rp.le_formula = p.parse_formula();
            end_of_line();
            m_graph.apply(m_ctx, goal, rule_id::le, rp);
            return;
        }
        if (p.eat_word("lift")) {
            bool is_seq = p.eat_word("seq");
            if (!is_seq) p.expect("gen");
            rule_params rp;
            label l = p.parse_label();
            if (!l.is_store()) throw script_error("lift labels are stores");
            rp.lift_label = l.as_store();
            end_of_line();
            m_graph.apply(m_ctx, goal, is_seq ? rule_id::lifted_seq : rule_id::lifted_gen, rp);
            return;
        }
        if (p.eat_word("slstar")) {
            rule_params rp;
            rp.heap_split = p.parse_heap();
            end_of_line();
            m_graph.apply(m_ctx, goal, rule_id::sl_star, rp);
            return;
        }
    } catch (script_error&) {
        throw;
    } catch (std::exception& e) {
        throw script_error("goal " + std::to_string(goal) + ", '" + line + "': " + e.what());
    }
    throw script_error("unknown command: " + line);
}

} // namespace dlp
