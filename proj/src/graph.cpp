#include "dip/graph.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace dip::amr {

namespace {

struct Lexer {
  const std::string& text;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  char next() {
    skip_ws();
    return text[pos++];
  }
  std::string token() {
    skip_ws();
    size_t start = pos;
    if (text[pos] == '"') {
      ++pos;
      while (pos < text.size() && text[pos] != '"') ++pos;
      if (pos >= text.size())
        throw GraphError(GraphError::Code::UnbalancedText,
                         "unterminated string constant");
      ++pos;
      return text.substr(start, pos - start);
    }
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(
                                    text[pos])) &&
           text[pos] != '(' && text[pos] != ')')
      ++pos;
    if (pos == start)
      throw GraphError(GraphError::Code::Malformed,
                       "expected token at offset " + std::to_string(start));
    return text.substr(start, pos - start);
  }
};

struct Parser {
  Lexer lex;
  IntentGraph g;
  std::set<std::string> declared;

  // Parse "(var / concept :role value ...)"; returns the variable.
  std::string parse_node() {
    if (lex.next() != '(')
      throw GraphError(GraphError::Code::Malformed, "expected '('");
    if (lex.peek() == ')') {  // "()" empty sentinel, only valid at top level
      lex.next();
      return "";
    }
    std::string var = lex.token();
    if (lex.peek() != '/')
      throw GraphError(GraphError::Code::Malformed,
                       "expected '/' after variable " + var);
    lex.next();
    std::string concept_label = lex.token();
    if (!declared.insert(var).second)
      throw GraphError(GraphError::Code::DuplicateVariable,
                       "duplicate variable " + var);
    g.nodes.push_back({var, concept_label});
    while (true) {
      char c = lex.peek();
      if (c == ')') {
        lex.next();
        return var;
      }
      if (c == '\0')
        throw GraphError(GraphError::Code::UnbalancedText,
                         "unclosed '(' for " + var);
      std::string role = lex.token();
      if (role.empty() || role[0] != ':')
        throw GraphError(GraphError::Code::Malformed,
                         "expected role, got " + role);
      if (lex.peek() == '(') {
        std::string child = parse_node();
        if (child.empty())
          throw GraphError(GraphError::Code::Malformed,
                           "empty node as role value");
        g.edges.push_back({var, role, child, false});
      } else {
        std::string value = lex.token();
        g.edges.push_back({var, role, value, true});  // re-resolved below
      }
    }
  }
};

bool is_quoted(const std::string& s) {
  return s.size() >= 2 && s.front() == '"' && s.back() == '"';
}

// ARG0..ARGn, then :opN numerically, then alphabetical.
int role_rank(const std::string& role, int* num) {
  *num = -1;
  if (role.rfind(":ARG", 0) == 0) {
    try {
      *num = std::stoi(role.substr(4));
      return 0;
    } catch (...) {
    }
  }
  return 1;
}

bool role_less(const std::string& a, const std::string& b) {
  int na, nb;
  int ra = role_rank(a, &na), rb = role_rank(b, &nb);
  if (ra != rb) return ra < rb;
  if (ra == 0) return na < nb;
  // :opN sorts numerically within the alphabetical block
  auto op_num = [](const std::string& r) -> int {
    if (r.rfind(":op", 0) == 0) {
      try {
        return std::stoi(r.substr(3));
      } catch (...) {
      }
    }
    return -1;
  };
  int oa = op_num(a), ob = op_num(b);
  if (oa >= 0 && ob >= 0) return oa < ob;
  return a < b;
}

}  // namespace

const GraphNode* IntentGraph::node(const std::string& var) const {
  for (const auto& n : nodes)
    if (n.var == var) return &n;
  return nullptr;
}

const std::string* IntentGraph::concept_of(const std::string& var) const {
  const GraphNode* n = node(var);
  return n ? &n->concept_label : nullptr;
}

std::vector<const GraphEdge*> IntentGraph::out_edges(
    const std::string& var) const {
  std::vector<const GraphEdge*> out;
  for (const auto& e : edges)
    if (e.source == var) out.push_back(&e);
  return out;
}

const GraphEdge* IntentGraph::first_edge(const std::string& var,
                                         const std::string& role) const {
  for (const auto& e : edges)
    if (e.source == var && e.role == role) return &e;
  return nullptr;
}

void IntentGraph::validate() const {
  if (empty()) {
    if (!root.empty() || !edges.empty())
      throw GraphError(GraphError::Code::Malformed,
                       "empty graph with root or edges");
    return;
  }
  std::set<std::string> vars;
  for (const auto& n : nodes)
    if (!vars.insert(n.var).second)
      throw GraphError(GraphError::Code::DuplicateVariable,
                       "duplicate variable " + n.var);
  if (!vars.count(root))
    throw GraphError(GraphError::Code::DanglingReference,
                     "root " + root + " undeclared");
  for (const auto& e : edges) {
    if (!vars.count(e.source))
      throw GraphError(GraphError::Code::DanglingReference,
                       "edge source " + e.source + " undeclared");
    if (!e.target_is_constant && !vars.count(e.target))
      throw GraphError(GraphError::Code::DanglingReference,
                       "edge target " + e.target + " undeclared");
  }
  // Root must reach every node.
  std::set<std::string> seen{root};
  std::vector<std::string> stack{root};
  while (!stack.empty()) {
    std::string v = stack.back();
    stack.pop_back();
    for (const auto& e : edges)
      if (e.source == v && !e.target_is_constant && !seen.count(e.target)) {
        seen.insert(e.target);
        stack.push_back(e.target);
      }
  }
  if (seen.size() != vars.size())
    throw GraphError(GraphError::Code::DanglingReference,
                     "nodes unreachable from root");
}

std::string IntentGraph::add_node(const std::string& concept_label,
                                  const std::string& hint) {
  std::string var = hint;
  int i = 2;
  while (node(var)) var = hint + std::to_string(i++);
  nodes.push_back({var, concept_label});
  if (root.empty()) root = var;
  return var;
}

IntentGraph parse_graph_text(const std::string& text) {
  Parser p{{text}, {}, {}};
  std::string root = p.parse_node();
  if (!p.lex.eof())
    throw GraphError(GraphError::Code::UnbalancedText,
                     "trailing text after graph");
  p.g.root = root;
  // Re-used variables become re-entrant edges.
  for (auto& e : p.g.edges)
    if (e.target_is_constant && !is_quoted(e.target) &&
        p.declared.count(e.target))
      e.target_is_constant = false;
  p.g.validate();
  return p.g;
}

std::vector<IntentGraph> parse_graph_blocks(const std::string& text) {
  std::vector<IntentGraph> out;
  std::istringstream is(text);
  std::string line, block;
  auto flush = [&] {
    bool blank = block.find_first_not_of(" \t\r\n") == std::string::npos;
    if (!blank) out.push_back(parse_graph_text(block));
    block.clear();
  };
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      flush();
    else
      block += line + "\n";
  }
  flush();
  return out;
}

std::string serialize_graph(const IntentGraph& g) {
  if (g.empty()) return "()";
  g.validate();
  std::set<std::string> expanded;
  std::ostringstream os;
  auto emit = [&](auto&& self, const std::string& var) -> void {
    if (expanded.count(var)) {
      os << var;
      return;
    }
    expanded.insert(var);
    os << '(' << var << " / " << *g.concept_of(var);
    auto outs = g.out_edges(var);
    std::stable_sort(outs.begin(), outs.end(),
                     [](const GraphEdge* a, const GraphEdge* b) {
                       return role_less(a->role, b->role);
                     });
    for (const GraphEdge* e : outs) {
      os << ' ' << e->role << ' ';
      if (e->target_is_constant)
        os << e->target;
      else
        self(self, e->target);
    }
    os << ')';
  };
  emit(emit, g.root);
  return os.str();
}

std::vector<Triple> to_triples(const IntentGraph& g) {
  std::vector<Triple> out;
  if (g.empty()) return out;
  for (const auto& n : g.nodes) out.push_back({n.var, "instance", n.concept_label});
  out.push_back({g.root, "TOP", *g.concept_of(g.root)});
  for (const auto& e : g.edges) {
    std::string role = e.role.substr(1);
    out.push_back({e.source, role, e.target});
  }
  return out;
}

bool isomorphic(const IntentGraph& a, const IntentGraph& b) {
  if (a.nodes.size() != b.nodes.size() || a.edges.size() != b.edges.size())
    return false;
  if (a.empty()) return true;
  // Backtracking search over concept-compatible variable mappings.
  std::map<std::string, std::string> m;
  std::set<std::string> used;
  auto edges_ok = [&]() {
    for (const auto& e : a.edges) {
      if (!m.count(e.source)) continue;
      if (!e.target_is_constant && !m.count(e.target)) continue;
      bool found = false;
      for (const auto& f : b.edges) {
        if (f.role != e.role) continue;
        if (f.source != m.at(e.source)) continue;
        if (e.target_is_constant != f.target_is_constant) continue;
        if (e.target_is_constant ? f.target == e.target
                                 : f.target == m.at(e.target)) {
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
    return true;
  };
  auto search = [&](auto&& self, size_t i) -> bool {
    if (i == a.nodes.size()) return edges_ok();
    const auto& na = a.nodes[i];
    for (const auto& nb : b.nodes) {
      if (nb.concept_label != na.concept_label || used.count(nb.var)) continue;
      if (na.var == a.root && nb.var != b.root) continue;
      m[na.var] = nb.var;
      used.insert(nb.var);
      if (edges_ok() && self(self, i + 1)) return true;
      m.erase(na.var);
      used.erase(nb.var);
    }
    return false;
  };
  return search(search, 0);
}

}  // namespace dip::amr
