#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>

#include "critnet/errors.h"
#include "critnet/format.h"
#include "critnet/netmodel.h"

namespace critnet {
namespace {

std::vector<std::string> Tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream stream(line.substr(0, line.find('#')));
  std::string token;
  while (stream >> token) tokens.push_back(token);
  return tokens;
}

bool ParseInteger(const std::string& token, long long* out) {
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, *out);
  return ec == std::errc() && ptr == end;
}

double ParseNumber(const std::string& token, const char* what, int line) {
  double value;
  if (!ParseDouble(token, &value)) {
    throw ParseError(std::string("bad ") + what + " '" + token + "'", line);
  }
  return value;
}

// Maps arbitrary node labels onto 0..n-1. Purely numeric label sets keep
// their numeric order so that files written by WriteEdgeList round-trip.
std::unordered_map<std::string, NodeId> DensifyLabels(const std::vector<std::string>& labels) {
  std::vector<std::string> unique;
  std::set<std::string> seen;
  bool numeric = true;
  for (const auto& label : labels) {
    if (seen.insert(label).second) unique.push_back(label);
    long long ignored;
    numeric = numeric && ParseInteger(label, &ignored);
  }
  if (numeric) {
    std::sort(unique.begin(), unique.end(), [](const std::string& a, const std::string& b) {
      return std::stoll(a) < std::stoll(b);
    });
  }
  std::unordered_map<std::string, NodeId> ids;
  for (size_t i = 0; i < unique.size(); ++i) ids[unique[i]] = static_cast<NodeId>(i);
  return ids;
}

struct RawEdge {
  std::string u;
  std::string v;
  double capacity;
  int line;
};

Topology BuildTopology(const std::vector<std::string>& node_labels,
                       const std::vector<RawEdge>& edges, const LoadOptions& options) {
  std::vector<std::string> labels = node_labels;
  for (const auto& edge : edges) {
    labels.push_back(edge.u);
    labels.push_back(edge.v);
  }
  auto ids = DensifyLabels(labels);
  std::set<std::pair<NodeId, NodeId>> seen;
  std::vector<Link> links;
  for (const auto& edge : edges) {
    NodeId u = ids.at(edge.u);
    NodeId v = ids.at(edge.v);
    if (u == v) throw ParseError("self-loop on node '" + edge.u + "'", edge.line);
    if (!(edge.capacity > 0) || !std::isfinite(edge.capacity)) {
      throw ParseError("capacity must be positive", edge.line);
    }
    if (!seen.insert({std::min(u, v), std::max(u, v)}).second) {
      throw ParseError("duplicate link " + edge.u + "-" + edge.v, edge.line);
    }
    links.push_back({u, v, edge.capacity});
  }
  if (links.empty()) throw ValidationError("topology has no links");
  Topology topology(static_cast<int>(ids.size()), std::move(links));
  if (!options.allow_disconnected && !topology.IsConnected()) {
    throw ValidationError("topology is disconnected");
  }
  return topology;
}

// Minimal XML scanner: enough of XML for GraphML node/edge/key/data tags.
struct XmlTag {
  std::string name;
  std::map<std::string, std::string> attributes;
  bool closing = false;
  bool self_closing = false;
  int line = 0;
};

class XmlScanner {
 public:
  explicit XmlScanner(std::string text) : text_(std::move(text)) {}

  // Returns false at end of input. `text` receives character data preceding
  // the tag.
  bool Next(XmlTag* tag, std::string* text) {
    text->clear();
    while (pos_ < text_.size()) {
      size_t open = text_.find('<', pos_);
      if (open == std::string::npos) {
        Advance(text_.size());
        return false;
      }
      text->append(text_, pos_, open - pos_);
      Advance(open);
      if (text_.compare(pos_, 4, "<!--") == 0) {
        SkipPast("-->");
        continue;
      }
      if (text_.compare(pos_, 2, "<?") == 0) {
        SkipPast("?>");
        continue;
      }
      if (text_.compare(pos_, 9, "<![CDATA[") == 0) {
        size_t end = text_.find("]]>", pos_);
        if (end == std::string::npos) throw ParseError("unterminated CDATA", line_);
        text->append(text_, pos_ + 9, end - pos_ - 9);
        Advance(end + 3);
        continue;
      }
      if (text_.compare(pos_, 2, "<!") == 0) {
        SkipPast(">");
        continue;
      }
      ParseTag(tag);
      return true;
    }
    return false;
  }

  int line() const { return line_; }

 private:
  void Advance(size_t to) {
    line_ += static_cast<int>(std::count(text_.begin() + pos_, text_.begin() + to, '\n'));
    pos_ = to;
  }

  void SkipPast(const char* marker) {
    size_t end = text_.find(marker, pos_);
    if (end == std::string::npos) throw ParseError("unterminated markup", line_);
    Advance(end + std::string(marker).size());
  }

  void ParseTag(XmlTag* tag) {
    *tag = XmlTag();
    tag->line = line_;
    size_t close = text_.find('>', pos_);
    if (close == std::string::npos) throw ParseError("unterminated tag", line_);
    std::string body = text_.substr(pos_ + 1, close - pos_ - 1);
    Advance(close + 1);
    if (!body.empty() && body.front() == '/') {
      tag->closing = true;
      body.erase(0, 1);
    }
    if (!body.empty() && body.back() == '/') {
      tag->self_closing = true;
      body.pop_back();
    }
    size_t i = 0;
    auto skip_space = [&] {
      while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
    };
    skip_space();
    while (i < body.size() && !std::isspace(static_cast<unsigned char>(body[i]))) {
      tag->name += body[i++];
    }
    // Drop namespace prefixes.
    if (auto colon = tag->name.find(':'); colon != std::string::npos) {
      tag->name = tag->name.substr(colon + 1);
    }
    while (true) {
      skip_space();
      if (i >= body.size()) break;
      size_t eq = body.find('=', i);
      if (eq == std::string::npos) throw ParseError("malformed attribute in <" + tag->name + ">", tag->line);
      std::string key = body.substr(i, eq - i);
      while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.pop_back();
      i = eq + 1;
      skip_space();
      if (i >= body.size() || (body[i] != '"' && body[i] != '\'')) {
        throw ParseError("unquoted attribute '" + key + "'", tag->line);
      }
      char quote = body[i++];
      size_t end = body.find(quote, i);
      if (end == std::string::npos) throw ParseError("unterminated attribute", tag->line);
      tag->attributes[key] = body.substr(i, end - i);
      i = end + 1;
    }
  }

  std::string text_;
  size_t pos_ = 0;
  int line_ = 1;
};

std::string Lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string Trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

Topology ParseEdgeList(std::istream& in, const LoadOptions& options) {
  std::vector<RawEdge> edges;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::vector<std::string> tokens = Tokenize(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 2 && tokens.size() != 3) {
      throw ParseError("expected 'u v capacity', got " + std::to_string(tokens.size()) +
                           " fields",
                       line_number);
    }
    double capacity = tokens.size() == 3 ? ParseNumber(tokens[2], "capacity", line_number) : 1.0;
    edges.push_back({tokens[0], tokens[1], capacity, line_number});
  }
  return BuildTopology({}, edges, options);
}

Topology ParseGraphMl(std::istream& in, const LoadOptions& options) {
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  XmlScanner scanner(std::move(content));

  std::set<std::string> capacity_keys;
  std::vector<std::string> nodes;
  std::vector<RawEdge> edges;
  bool in_edge = false;
  std::string data_key;
  XmlTag tag;
  std::string text;
  while (scanner.Next(&tag, &text)) {
    if (tag.name == "key" && !tag.closing) {
      auto name = tag.attributes.find("attr.name");
      auto scope = tag.attributes.find("for");
      bool edge_scope = scope == tag.attributes.end() || scope->second == "edge" ||
                        scope->second == "all";
      if (name != tag.attributes.end() && edge_scope && Lower(name->second) == "capacity") {
        capacity_keys.insert(tag.attributes["id"]);
      }
    } else if (tag.name == "node" && !tag.closing) {
      auto id = tag.attributes.find("id");
      if (id == tag.attributes.end()) throw ParseError("<node> without id", tag.line);
      nodes.push_back(id->second);
    } else if (tag.name == "edge") {
      if (tag.closing) {
        in_edge = false;
        continue;
      }
      auto source = tag.attributes.find("source");
      auto target = tag.attributes.find("target");
      if (source == tag.attributes.end() || target == tag.attributes.end()) {
        throw ParseError("<edge> needs source and target", tag.line);
      }
      edges.push_back({source->second, target->second, 1.0, tag.line});
      in_edge = !tag.self_closing;
    } else if (tag.name == "data") {
      if (!tag.closing) {
        data_key = tag.self_closing ? "" : tag.attributes["key"];
      } else {
        if (in_edge && capacity_keys.count(data_key)) {
          edges.back().capacity = ParseNumber(Trim(text), "capacity", tag.line);
        }
        data_key.clear();
      }
    }
  }
  std::set<std::string> declared(nodes.begin(), nodes.end());
  for (const auto& edge : edges) {
    for (const auto& end : {edge.u, edge.v}) {
      if (!declared.count(end)) throw ParseError("edge references undeclared node '" + end + "'", edge.line);
    }
  }
  // GraphML node ids are densified in declaration order, not numerically.
  std::vector<RawEdge> renamed = edges;
  std::unordered_map<std::string, std::string> rename;
  for (size_t i = 0; i < nodes.size(); ++i) rename[nodes[i]] = std::to_string(i);
  std::vector<std::string> node_labels;
  for (size_t i = 0; i < nodes.size(); ++i) node_labels.push_back(std::to_string(i));
  for (auto& edge : renamed) {
    edge.u = rename.at(edge.u);
    edge.v = rename.at(edge.v);
  }
  return BuildTopology(node_labels, renamed, options);
}

Topology LoadTopology(const std::string& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open topology file '" + path + "'");
  TopologyFormat format = options.format;
  if (format == TopologyFormat::kAuto) {
    bool graphml = path.size() >= 8 && Lower(path.substr(path.size() - 8)) == ".graphml";
    format = graphml ? TopologyFormat::kGraphMl : TopologyFormat::kEdgeList;
  }
  return format == TopologyFormat::kGraphMl ? ParseGraphMl(in, options)
                                            : ParseEdgeList(in, options);
}

void WriteEdgeList(const Topology& topology, std::ostream& out) {
  out << "# u v capacity\n";
  for (const Link& link : topology.links()) {
    out << link.u << ' ' << link.v << ' ' << FormatDouble(link.capacity) << '\n';
  }
}

void SaveTopology(const Topology& topology, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  WriteEdgeList(topology, out);
}

TrafficMatrix ParseTrafficMatrix(std::istream& in, int num_nodes) {
  std::vector<Demand> demands;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::vector<std::string> tokens = Tokenize(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 3) throw ParseError("expected 'src dst volume'", line_number);
    long long src, dst;
    if (!ParseInteger(tokens[0], &src) || !ParseInteger(tokens[1], &dst)) {
      throw ParseError("node ids must be integers", line_number);
    }
    if (src < 0 || dst < 0 || src >= num_nodes || dst >= num_nodes) {
      throw ParseError("node id out of range", line_number);
    }
    if (src == dst) throw ParseError("demand with src == dst", line_number);
    double volume = ParseNumber(tokens[2], "volume", line_number);
    if (!std::isfinite(volume) || volume < 0) {
      throw ParseError("volume must be finite and non-negative", line_number);
    }
    demands.push_back({static_cast<NodeId>(src), static_cast<NodeId>(dst), volume});
  }
  return TrafficMatrix::FromDemands(num_nodes, demands);
}

TrafficMatrix LoadTrafficMatrix(const std::string& path, int num_nodes) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open traffic matrix file '" + path + "'");
  return ParseTrafficMatrix(in, num_nodes);
}

void WriteTrafficMatrix(const TrafficMatrix& tm, std::ostream& out) {
  out << "# src dst volume\n";
  for (const Demand& d : tm.demands()) {
    out << d.src << ' ' << d.dst << ' ' << FormatDouble(d.volume) << '\n';
  }
}

void SaveTrafficMatrix(const TrafficMatrix& tm, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  WriteTrafficMatrix(tm, out);
}

}  // namespace critnet
