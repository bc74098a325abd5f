#pragma once

// Proof and model serialization: JSON, Graphviz DOT and indented text.

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "jtab/cutelim.hpp"
#include "jtab/prover.hpp"
#include "jtab/semantics.hpp"

namespace jtab {

using json = nlohmann::json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string render_payload(const SignedFormula& sf) {
  return sf.evidential() ? render_evidential(sf.term, sf.body) : render_formula(sf.body);
}

namespace detail {

struct Numbered {
  const TabNode* node;
  std::size_t id;
  std::vector<std::size_t> premises;
  std::vector<std::size_t> children;
  bool closed = false;
};

// Pre-order numbering; premises resolve to the nearest ancestor carrying the
// premise formula.
inline std::vector<Numbered> number_nodes(const Tableau& t, const ConstantSpecification& cs) {
  std::vector<Numbered> out;
  std::vector<std::pair<SignedFormula, std::size_t>> path;
  BranchSet b(cs);
  std::function<std::size_t(const TabNode&)> visit = [&](const TabNode& n) {
    std::size_t id = out.size();
    out.push_back({&n, id, {}, {}, false});
    for (const auto& p : n.step.premises) {
      for (auto it = path.rbegin(); it != path.rend(); ++it) {
        if (it->first == p) {
          out[id].premises.push_back(it->second);
          break;
        }
      }
    }
    path.push_back({n.formula, id});
    b.push(n.formula);
    if (n.children.empty()) out[id].closed = b.closed();
    for (const auto& c : n.children) {
      std::size_t cid = visit(c);
      out[id].children.push_back(cid);
    }
    b.pop();
    path.pop_back();
    return id;
  };
  visit(t.root);
  return out;
}

}  // namespace detail

inline json proof_to_json(const Tableau& t, const ConstantSpecification& cs) {
  json nodes = json::array();
  for (const auto& n : detail::number_nodes(t, cs)) {
    const auto& sf = n.node->formula;
    json j = {{"id", n.id},
              {"sign", sf.is_true() ? "T" : "F"},
              {"kind", sf.evidential() ? "evidential" : "formula"},
              {"payload", render_payload(sf)},
              {"rule", to_string(n.node->step.rule)},
              {"premises", n.premises},
              {"children", n.children}};
    if (n.node->children.empty()) j["closed"] = n.closed;
    nodes.push_back(std::move(j));
  }
  return json{{"root", render_formula(t.root.formula.body)}, {"nodes", std::move(nodes)}};
}

namespace detail {

// Product index of a linear step, recovered from its premise and product.
inline int linear_part(const Step& s, const SignedFormula& product) {
  if (s.rule == Rule::FImp && !s.premises.empty() && product == SignedFormula::f(s.premises[0].body.rhs())) {
    return 1;
  }
  return 0;
}

}  // namespace detail

/// Inverse of proof_to_json. Throws FormatError on malformed input.
inline Tableau proof_from_json(const json& j) {
  try {
    const auto& arr = j.at("nodes");
    if (!arr.is_array() || arr.empty()) throw FormatError("proof has no nodes");
    std::map<std::size_t, const json*> by_id;
    for (const auto& n : arr) by_id[n.at("id").get<std::size_t>()] = &n;
    auto formula_of = [&](const json& n) {
      std::string text = n.at("sign").get<std::string>() + " " + n.at("payload").get<std::string>();
      SignedFormula sf = parse_signed(text);
      bool evid = n.at("kind").get<std::string>() == "evidential";
      if (evid != sf.evidential()) throw FormatError("kind does not match payload of node " + n.at("id").dump());
      return sf;
    };
    std::size_t depth = 0;
    std::function<TabNode(std::size_t, int)> build = [&](std::size_t id, int fork_part) -> TabNode {
      if (++depth > 100000) throw FormatError("proof is not a tree");
      auto it = by_id.find(id);
      if (it == by_id.end()) throw FormatError("dangling node id " + std::to_string(id));
      const json& n = *it->second;
      TabNode out;
      out.formula = formula_of(n);
      auto rule = rule_from_string(n.at("rule").get<std::string>());
      if (!rule) throw FormatError("unknown rule " + n.at("rule").dump());
      out.step.rule = *rule;
      for (auto pid : n.at("premises")) {
        auto p = by_id.find(pid.get<std::size_t>());
        if (p == by_id.end()) throw FormatError("dangling premise id " + pid.dump());
        out.step.premises.push_back(formula_of(*p->second));
      }
      out.step.part = is_branching(*rule) ? fork_part : detail::linear_part(out.step, out.formula);
      const auto& ch = n.at("children");
      for (std::size_t k = 0; k < ch.size(); ++k) {
        out.children.push_back(build(ch[k].get<std::size_t>(), static_cast<int>(k)));
      }
      return out;
    };
    return Tableau{build(arr.front().at("id").get<std::size_t>(), 0)};
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed proof JSON: ") + e.what());
  } catch (const SyntaxError& e) {
    throw FormatError(std::string("malformed payload: ") + e.what());
  }
}

inline std::string proof_to_dot(const Tableau& t, const ConstantSpecification& cs) {
  auto esc = [](const std::string& s) {
    std::string o;
    for (char c : s) {
      if (c == '"' || c == '\\') o += '\\';
      o += c;
    }
    return o;
  };
  std::string out = "digraph tableau {\n  node [shape=plaintext];\n";
  for (const auto& n : detail::number_nodes(t, cs)) {
    std::string label = std::to_string(n.id) + ". " + render_signed(n.node->formula) + "  (" +
                        to_string(n.node->step.rule) + ")";
    if (n.closed) label += "\\n⊗";
    out += "  n" + std::to_string(n.id) + " [label=\"" + esc(label) + "\"];\n";
    for (auto c : n.children) out += "  n" + std::to_string(n.id) + " -> n" + std::to_string(c) + ";\n";
  }
  return out + "}\n";
}

inline std::string proof_to_text(const Tableau& t, const ConstantSpecification& cs) {
  auto nodes = detail::number_nodes(t, cs);
  std::string out;
  std::function<void(std::size_t, std::size_t)> emit = [&](std::size_t id, std::size_t indent) {
    const auto& n = nodes[id];
    out += std::string(indent, ' ') + std::to_string(id) + ". " + render_signed(n.node->formula) + "  [" +
           to_string(n.node->step.rule);
    for (auto p : n.premises) out += " " + std::to_string(p);
    out += "]";
    if (n.closed) out += "  ⊗";
    out += "\n";
    std::size_t next = indent + (n.children.size() > 1 ? 2 : 0);
    for (auto c : n.children) emit(c, next);
  };
  emit(0, 0);
  return out;
}

inline json model_to_json(const Model& m) {
  json val = json::object();
  for (const auto& [p, v] : m.valuation) val[p] = v;
  json ev = json::array();
  for (const auto& e : m.evidence) ev.push_back({render_term(e.term), render_formula(e.body)});
  json uni = json::array();
  for (const auto& f : m.universe) uni.push_back(render_formula(f));
  json terms = json::array();
  for (const auto& t : m.terms) terms.push_back(render_term(t));
  return json{{"valuation", val}, {"evidence", ev}, {"universe", uni}, {"terms", terms}};
}

inline Model model_from_json(const json& j) {
  try {
    Model m;
    for (const auto& [p, v] : j.at("valuation").items()) m.valuation[p] = v.get<bool>();
    for (const auto& e : j.at("evidence")) {
      m.evidence.insert({parse_term(e.at(0).get<std::string>()), parse_formula(e.at(1).get<std::string>())});
    }
    for (const auto& f : j.at("universe")) m.universe.insert(parse_formula(f.get<std::string>()));
    for (const auto& t : j.at("terms")) m.terms.insert(parse_term(t.get<std::string>()));
    return m;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed model JSON: ") + e.what());
  } catch (const SyntaxError& e) {
    throw FormatError(std::string("malformed model entry: ") + e.what());
  }
}

inline json branch_to_json(const std::vector<SignedFormula>& branch) {
  json out = json::array();
  for (const auto& sf : branch) out.push_back(render_signed(sf));
  return out;
}

inline json trace_to_json(const std::vector<TraceEntry>& trace) {
  json out = json::array();
  for (const auto& e : trace) {
    json after = json::array();
    for (const auto& [p, m] : e.after) {
      after.push_back({{"pivot", render_pivot(p)}, {"rank", m.rank}, {"weight", m.weight}});
    }
    out.push_back({{"case", e.label},
                   {"pivot", render_pivot(e.pivot)},
                   {"rank", e.before.rank},
                   {"weight", e.before.weight},
                   {"replacements", after}});
  }
  return out;
}

}  // namespace jtab
