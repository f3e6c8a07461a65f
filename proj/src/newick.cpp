#include "waldgeo/newick.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <functional>
#include <map>

namespace waldgeo {

namespace {

struct TempNode {
  int leaf = 0;                 // 0 for an unlabelled internal vertex
  double lambda = 0.0;          // weight of the edge towards the parent
  std::vector<int> children;
};

class Parser {
 public:
  Parser(std::string_view text, Parametrization param) : text_(text), param_(param) {}

  // Returns root node ids, one per ";"-separated tree.
  std::vector<int> run() {
    std::vector<int> roots;
    skip_ws();
    while (pos_ < text_.size()) {
      int root = parse_subtree(/*top_level=*/true);
      roots.push_back(root);
      skip_ws();
      if (pos_ < text_.size()) {
        expect(';');
        skip_ws();
      }
    }
    if (roots.empty()) throw ParseError("empty input", 0);
    return roots;
  }

  std::vector<TempNode>& nodes() { return nodes_; }
  const std::map<int, std::size_t>& seen_labels() const { return seen_labels_; }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void expect(char c) {
    if (peek() != c) {
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
    ++pos_;
  }

  int parse_subtree(bool top_level) {
    skip_ws();
    int node;
    if (peek() == '(') {
      std::size_t open_at = pos_;
      ++pos_;
      node = static_cast<int>(nodes_.size());
      nodes_.emplace_back();
      std::vector<int> children;
      children.push_back(parse_subtree(false));
      skip_ws();
      if (peek() != ',') throw ParseError("subtree needs at least two children", pos_);
      while (peek() == ',') {
        ++pos_;
        children.push_back(parse_subtree(false));
        skip_ws();
      }
      if (peek() != ')') throw ParseError("unbalanced parenthesis", open_at);
      ++pos_;
      nodes_[node].children = std::move(children);
    } else {
      node = parse_leaf();
    }
    skip_ws();
    if (peek() == ':') {
      ++pos_;
      double lambda = parse_weight();
      // A top-level annotation is a dangling edge with an unlabelled
      // degree-1 endpoint; canonicalization removes it, so drop it here.
      if (!top_level) nodes_[node].lambda = lambda;
    }
    return node;
  }

  int parse_leaf() {
    skip_ws();
    std::size_t start = pos_;
    if (!std::isdigit(static_cast<unsigned char>(peek()))) {
      throw ParseError("expected a leaf label or '('", pos_);
    }
    long value = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      value = value * 10 + (text_[pos_] - '0');
      if (value > kMaxLeaves) throw ParseError("leaf label too large", start);
      ++pos_;
    }
    if (value < 1) throw ParseError("leaf labels start at 1", start);
    auto [it, inserted] = seen_labels_.emplace(static_cast<int>(value), start);
    if (!inserted) throw ParseError("duplicate leaf label " + std::to_string(value), start);
    int node = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    nodes_[node].leaf = static_cast<int>(value);
    return node;
  }

  double parse_weight() {
    skip_ws();
    std::size_t start = pos_;
    if (text_.substr(pos_, 3) == "inf" || text_.substr(pos_, 3) == "Inf") {
      pos_ += 3;
      return 1.0;
    }
    if (peek() == '-') throw ParseError("negative branch annotation", start);
    std::size_t end = pos_;
    while (end < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.' ||
            text_[end] == 'e' || text_[end] == 'E' ||
            ((text_[end] == '+' || text_[end] == '-') && end > pos_ &&
             (text_[end - 1] == 'e' || text_[end - 1] == 'E')))) {
      ++end;
    }
    if (end == pos_) throw ParseError("expected a number after ':'", start);
    double value = 0.0;
    try {
      value = std::stod(std::string(text_.substr(pos_, end - pos_)));
    } catch (const std::exception&) {
      throw ParseError("malformed number", start);
    }
    pos_ = end;
    if (value < 0.0) throw ParseError("negative branch annotation", start);
    if (param_ == Parametrization::kLength) return lambda_from_length(value);
    if (value > 1.0) throw ParseError("weight above 1", start);
    return value;
  }

  std::string_view text_;
  Parametrization param_;
  std::size_t pos_ = 0;
  std::vector<TempNode> nodes_;
  std::map<int, std::size_t> seen_labels_;
};

std::string format_weight(double lambda, Parametrization param) {
  double value = param == Parametrization::kLambda ? lambda : length_from_lambda(lambda);
  if (std::isinf(value)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace

ForestGraph parse_newick(std::string_view text, Parametrization param) {
  Parser parser(text, param);
  std::vector<int> roots = parser.run();
  auto& nodes = parser.nodes();

  int n = 0;
  for (const auto& [label, offset] : parser.seen_labels()) n = std::max(n, label);
  for (int u = 1; u <= n; ++u) {
    if (!parser.seen_labels().count(u)) {
      throw ParseError("leaf labels must cover 1..N; missing " + std::to_string(u), 0);
    }
  }

  ForestGraph g(n);
  std::vector<int> vertex_of(nodes.size(), -1);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    vertex_of[i] = nodes[i].leaf != 0 ? g.leaf_vertex(nodes[i].leaf) : g.add_internal_vertex();
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (int child : nodes[i].children) {
      g.add_edge(vertex_of[i], vertex_of[child], nodes[child].lambda);
    }
  }
  return g;
}

Wald parse_wald(std::string_view text, Parametrization param) {
  return canonicalize(parse_newick(text, param));
}

std::string to_newick(const Wald& w, Parametrization param) {
  std::string out;
  for (const auto& tree : component_trees(w.topology())) {
    if (!out.empty()) out += " ";
    if (tree.n_vertices() == 1) {
      out += std::to_string(tree.leaf_of[0]) + ";";
      continue;
    }
    if (tree.n_vertices() == 2) {
      int u = tree.leaf_of[0], v = tree.leaf_of[1];
      double lambda = w.lambda_of(tree.adj[0][0].second);
      out += "(" + std::to_string(u) + ":" + format_weight(0.0, param) + "," +
             std::to_string(v) + ":" + format_weight(lambda, param) + ");";
      continue;
    }
    // Root beside the lowest leaf (vertex 0): its unique neighbour becomes
    // the Newick root, with the lowest leaf as the first child.
    int root = tree.adj[0][0].first;
    // subtree text plus the smallest leaf it contains, for stable ordering
    std::function<std::pair<std::string, int>(int, int, int)> emit =
        [&](int v, int parent, int split_index) -> std::pair<std::string, int> {
      std::string suffix = ":" + format_weight(w.lambda_of(split_index), param);
      if (tree.leaf_of[v] != 0) {
        return {std::to_string(tree.leaf_of[v]) + suffix, tree.leaf_of[v]};
      }
      std::vector<std::pair<std::string, int>> parts;
      for (auto [nbr, si] : tree.adj[v]) {
        if (nbr != parent) parts.push_back(emit(nbr, v, si));
      }
      std::sort(parts.begin(), parts.end(),
                [](const auto& a, const auto& b) { return a.second < b.second; });
      std::string body = "(";
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) body += ",";
        body += parts[i].first;
      }
      body += ")";
      return {body + suffix, parts.front().second};
    };
    std::vector<std::pair<std::string, int>> parts;
    for (auto [nbr, si] : tree.adj[root]) parts.push_back(emit(nbr, root, si));
    std::sort(parts.begin(), parts.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    std::string body = "(";
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) body += ",";
      body += parts[i].first;
    }
    body += ");";
    out += body;
  }
  return out;
}

}  // namespace waldgeo
