#include "histmon/dp.hpp"

#include "histmon/eval.hpp"

#include <set>
#include <unordered_map>

namespace histmon {
namespace dp {

namespace {

struct Builder {
    std::vector<FormulaPtr> order; // children before parents
    std::unordered_map<std::string, FormulaPtr> rep;

    void add(const FormulaPtr& f) {
        if (f->left) add(f->left);
        if (f->right) add(f->right);
        std::string key = structure_key(*f);
        if (rep.emplace(std::move(key), f).second) order.push_back(f);
    }

    const FormulaPtr& representative(const FormulaPtr& f) const { return rep.at(structure_key(*f)); }
};

using Column = Substitution;
using Table = std::map<Column, std::vector<uint8_t>>;

class Engine {
public:
    Engine(const History& h, const Registry& reg) : h_(h), reg_(reg) {
        for (const auto& s : h.sessions())
            for (const auto& e : s.events()) tuples_[e.pred].insert(e.args);
    }

    bool run(const FormulaPtr& f, Stats* stats) {
        builder_.add(f);
        request_columns(f);
        for (const auto& node : builder_.order) fill(node);
        if (stats) {
            stats->nodes = builder_.order.size();
            for (const auto& entry : tables_) {
                stats->columns += entry.second.size();
                stats->cells += entry.second.size() * static_cast<size_t>(h_.size());
            }
        }
        const Table& root = tables_.at(builder_.representative(f).get());
        return root.at(Substitution{})[static_cast<size_t>(h_.size() - 1)] != 0;
    }

private:
    const History& h_;
    const Registry& reg_;
    Builder builder_;
    std::unordered_map<const Formula*, std::set<Column>> needs_;
    std::unordered_map<const Formula*, Table> tables_;
    std::unordered_map<const Formula*, std::map<std::string, Sort>> frees_;
    std::map<std::string, std::set<std::vector<Value>>> tuples_;

    const std::map<std::string, Sort>& frees(const FormulaPtr& f) {
        auto it = frees_.find(f.get());
        if (it == frees_.end()) it = frees_.emplace(f.get(), free_vars(*f)).first;
        return it->second;
    }

    Column restrict_to(const Substitution& s, const FormulaPtr& node) {
        const auto& fv = frees(node);
        return s.restricted_to([&](const std::string& n) { return fv.count(n) != 0; });
    }

    // Top-down pass deciding which columns each table needs. Only bindings
    // reachable from actual history tuples are requested, which keeps every
    // table within the constants-per-sort bound.
    void request_columns(const FormulaPtr& root) {
        needs_[builder_.representative(root).get()].insert(Substitution{});
        for (auto it = builder_.order.rbegin(); it != builder_.order.rend(); ++it) {
            const FormulaPtr& node = *it;
            const auto& cols = needs_[node.get()];
            switch (node->kind) {
            case FormulaKind::True:
            case FormulaKind::Pred:
            case FormulaKind::Rel: break;

            case FormulaKind::Not:
            case FormulaKind::Prev:
                for (const auto& c : cols) request(node->left, c);
                break;

            case FormulaKind::And:
            case FormulaKind::Since:
                for (const auto& c : cols) {
                    request(node->left, c);
                    request(node->right, c);
                }
                break;

            case FormulaKind::ForallP: {
                auto tit = tuples_.find(node->name);
                if (tit == tuples_.end()) break;
                for (const auto& c : cols) {
                    for (const auto& tuple : tit->second) {
                        Substitution ext = c;
                        if (!bind_tuple(ext, node->vars, tuple)) continue;
                        request(node->left, ext);
                    }
                }
                break;
            }

            case FormulaKind::Count:
            case FormulaKind::ForallG:
            case FormulaKind::ExistsG:
                throw CapabilityError("formula uses a construct outside the table engine's fragment");
            }
        }
    }

    void request(const FormulaPtr& child, const Substitution& binding) {
        const FormulaPtr& rep = builder_.representative(child);
        needs_[rep.get()].insert(restrict_to(binding, rep));
    }

    static bool bind_tuple(Substitution& s, const std::vector<TypedVar>& vars,
                           const std::vector<Value>& tuple) {
        if (vars.size() != tuple.size()) return false;
        for (size_t k = 0; k < vars.size(); ++k) {
            if (tuple[k].sort() != vars[k].sort) return false;
            s.bind(vars[k].name, tuple[k]);
        }
        return true;
    }

    uint8_t lookup(const FormulaPtr& child, const Substitution& binding, int i) {
        const FormulaPtr& rep = builder_.representative(child);
        return tables_.at(rep.get()).at(restrict_to(binding, rep))[static_cast<size_t>(i - 1)];
    }

    void fill(const FormulaPtr& node) {
        Table& table = tables_[node.get()];
        const int n = h_.size();
        for (const Column& col : needs_[node.get()]) {
            std::vector<uint8_t>& rows = table[col];
            rows.assign(static_cast<size_t>(n), 0);
            switch (node->kind) {
            case FormulaKind::True:
                rows.assign(static_cast<size_t>(n), 1);
                break;

            case FormulaKind::Pred: {
                // Terms are rigid: one evaluation serves every row.
                Event e;
                e.pred = node->name;
                for (const auto& t : node->terms) e.args.push_back(eval_term(*t, col, reg_));
                for (int i = 1; i <= n; ++i) rows[i - 1] = h_.at(i).contains(e) ? 1 : 0;
                break;
            }

            case FormulaKind::Rel: {
                std::vector<Value> args;
                std::vector<Sort> sorts;
                for (const auto& t : node->terms) {
                    args.push_back(eval_term(*t, col, reg_));
                    sorts.push_back(t->sort());
                }
                uint8_t v = eval_rel(node->name, sorts, args, reg_, node->pos) ? 1 : 0;
                rows.assign(static_cast<size_t>(n), v);
                break;
            }

            case FormulaKind::Not:
                for (int i = 1; i <= n; ++i) rows[i - 1] = lookup(node->left, col, i) ? 0 : 1;
                break;

            case FormulaKind::And:
                for (int i = 1; i <= n; ++i)
                    rows[i - 1] = (lookup(node->left, col, i) && lookup(node->right, col, i)) ? 1 : 0;
                break;

            case FormulaKind::Prev:
                for (int i = 2; i <= n; ++i) rows[i - 1] = lookup(node->left, col, i - 1);
                break;

            case FormulaKind::Since:
                rows[0] = lookup(node->right, col, 1);
                for (int i = 2; i <= n; ++i) {
                    uint8_t here = lookup(node->right, col, i);
                    uint8_t carry = lookup(node->left, col, i) && rows[i - 2];
                    rows[i - 1] = (here || carry) ? 1 : 0;
                }
                break;

            case FormulaKind::ForallP: {
                for (int i = 1; i <= n; ++i) {
                    uint8_t all = 1;
                    for (const Event* e : h_.at(i).with_pred(node->name)) {
                        Substitution ext = col;
                        if (e->args.size() != node->vars.size() || !bind_tuple(ext, node->vars, e->args))
                            throw EvalError("event " + node->name + " does not fit the quantifier",
                                            node->pos);
                        if (!lookup(node->left, ext, i)) {
                            all = 0;
                            break;
                        }
                    }
                    rows[i - 1] = all;
                }
                break;
            }

            case FormulaKind::Count:
            case FormulaKind::ForallG:
            case FormulaKind::ExistsG:
                throw CapabilityError("formula uses a construct outside the table engine's fragment");
            }
        }
    }
};

} // namespace

std::vector<FormulaPtr> closure(const FormulaPtr& f) {
    Builder b;
    b.add(f);
    return b.order;
}

bool check_dp(const History& h, const FormulaPtr& f, const Registry& reg, Stats* stats) {
    if (h.empty()) throw EmptyHistoryError();
    if (uses_count(*f))
        throw CapabilityError("the table engine does not support the count quantifier");
    if (uses_guards(*f))
        throw CapabilityError("the table engine does not support guarded quantifiers");
    if (!is_closed(*f)) throw Error("table engine requires a closed formula");
    Engine e(h, reg);
    return e.run(f, stats);
}

} // namespace dp
} // namespace histmon
