#include <map>

#include "nl2gql/gql.hpp"

namespace nl2gql::gql {

namespace {

class Renamer {
public:
    std::string bind(const std::string& old) {
        std::string fresh = "a" + std::to_string(next_++);
        if (!old.empty()) names_[old] = fresh;
        return fresh;
    }

    void rewrite(Expr& e) const {
        if (e.kind == ExprKind::Variable || e.kind == ExprKind::Property) {
            auto it = names_.find(e.name);
            if (it != names_.end()) e.name = it->second;
        }
        for (auto& a : e.args) rewrite(a);
    }

    bool bound(const std::string& name) const { return names_.count(name) > 0; }
    const std::string& lookup(const std::string& name) const { return names_.at(name); }

private:
    std::map<std::string, std::string> names_;
    int next_ = 0;
};

void order_equalities(Expr& e) {
    for (auto& a : e.args) order_equalities(a);
    if (e.kind == ExprKind::Compare && (e.op == CompareOp::Eq || e.op == CompareOp::Ne)) {
        if (print(e.args[1]) < print(e.args[0])) std::swap(e.args[0], e.args[1]);
    }
}

void rename_items(std::vector<ProjectionItem>& items, Renamer& r) {
    for (auto& item : items) {
        const bool passthrough = item.expr.kind == ExprKind::Variable &&
                                 (item.alias.empty() || item.alias == item.expr.name);
        r.rewrite(item.expr);
        order_equalities(item.expr);
        if (item.alias.empty()) continue;
        if (passthrough) {
            item.alias = item.expr.name;
        } else {
            item.alias = r.bind(item.alias);
        }
    }
}

} // namespace

Query canonicalize(const Query& query) {
    Query q = query;
    Renamer r;
    for (auto& c : q.clauses) {
        if (auto* m = std::get_if<MatchClause>(&c)) {
            for (std::size_t i = 0; i < m->nodes.size(); ++i) {
                m->nodes[i].alias = r.bind(m->nodes[i].alias);
                if (i < m->edges.size()) m->edges[i].alias = r.bind(m->edges[i].alias);
            }
        } else if (auto* w = std::get_if<WhereClause>(&c)) {
            r.rewrite(w->predicate);
            order_equalities(w->predicate);
        } else if (auto* wi = std::get_if<WithClause>(&c)) {
            rename_items(wi->items, r);
        } else if (auto* ret = std::get_if<ReturnClause>(&c)) {
            rename_items(ret->items, r);
        } else if (auto* ob = std::get_if<OrderByClause>(&c)) {
            r.rewrite(ob->key);
            order_equalities(ob->key);
        }
    }
    return q;
}

} // namespace nl2gql::gql
