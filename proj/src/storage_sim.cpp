#include "moulin/storage_sim.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <future>
#include <sstream>

namespace moulin {

Cluster::Cluster(CodeInstance instance, std::uint64_t seed)
    : inst_(std::move(instance)), rng_(seed), nodes_(static_cast<std::size_t>(inst_.n())) {}

std::vector<std::size_t> Cluster::healthy_nodes() const {
  std::vector<std::size_t> out;
  for (std::size_t h = 0; h < nodes_.size(); ++h)
    if (nodes_[h]) out.push_back(h);
  return out;
}

std::vector<std::size_t> Cluster::failed_nodes() const {
  std::vector<std::size_t> out;
  for (std::size_t h = 0; h < nodes_.size(); ++h)
    if (!nodes_[h]) out.push_back(h);
  return out;
}

const NodeContent& Cluster::share(std::size_t node) const {
  if (node >= nodes_.size()) throw CodingError("node " + std::to_string(node) + " does not exist");
  if (!nodes_[node]) throw CodingError("node " + std::to_string(node) + " has failed");
  return *nodes_[node];
}

void Cluster::require_populated() const {
  if (!populated()) throw CodingError("nothing has been stored");
}

void Cluster::store(std::vector<Element> message) {
  if (populated()) throw CodingError("cluster already holds a file");
  if (message.size() != inst_.params.file_size)
    throw CodingError("message needs " + std::to_string(inst_.params.file_size) + " symbols, got " +
                      std::to_string(message.size()));
  for (auto x : message)
    if (x >= inst_.field.modulus()) throw CodingError("message symbol outside the field");
  const auto phi = encode(inst_, message);
  original_.clear();
  for (std::size_t h = 0; h < nodes_.size(); ++h) {
    original_.push_back(extract_node(inst_, phi, h));
    nodes_[h] = original_.back();
  }
  message_ = std::move(message);
  events_.push_back({"store", {}, {}, std::nullopt});
}

void Cluster::store_random() {
  std::vector<Element> m(inst_.params.file_size);
  std::uniform_int_distribution<Element> dist(0, inst_.field.modulus() - 1);
  for (auto& x : m) x = dist(rng_);
  store(std::move(m));
}

std::vector<std::string> Cluster::fail(const std::vector<std::size_t>& nodes) {
  require_populated();
  auto sorted = nodes;
  std::ranges::sort(sorted);
  if (std::ranges::adjacent_find(sorted) != sorted.end()) throw CodingError("node listed twice");
  for (auto h : sorted) share(h);
  for (auto h : sorted) nodes_[h].reset();

  std::vector<std::string> warnings;
  const auto alive = healthy_nodes().size();
  if (alive < static_cast<std::size_t>(inst_.d()))
    warnings.push_back("only " + std::to_string(alive) + " healthy nodes, fewer than d: repair impossible");
  if (alive < static_cast<std::size_t>(inst_.k()))
    warnings.push_back("only " + std::to_string(alive) + " healthy nodes, fewer than k: file at risk");
  events_.push_back({"fail", sorted, warnings, std::nullopt});
  return warnings;
}

RepairRecord Cluster::repair_all(HelperPolicy policy) {
  require_populated();
  const auto failing = failed_nodes();
  auto survivors = healthy_nodes();
  const auto d = static_cast<std::size_t>(inst_.d());
  if (survivors.size() < d)
    throw CodingError("repair needs d = " + std::to_string(d) + " helpers, only " + std::to_string(survivors.size()) +
                      " nodes are healthy");

  RepairRecord rec;
  rec.failing = failing;
  if (failing.empty()) {
    rec.exact = true;
    events_.push_back({"repair", {}, {"no failed nodes"}, true});
    ledger_.push_back(rec);
    return rec;
  }
  if (policy == HelperPolicy::random) std::ranges::shuffle(survivors, rng_);
  survivors.resize(d);
  std::ranges::sort(survivors);
  rec.helpers = survivors;

  const auto c = failing.size();
  std::vector<NodeContent> rebuilt;
  if (c < static_cast<std::size_t>(inst_.k())) {
    const auto plan = plan_repair(inst_, complement_chain(inst_, failing));
    std::vector<std::future<HelpMessage>> pending;
    for (auto h : survivors)
      pending.push_back(std::async(std::launch::async, [&, h] { return help_message(inst_, plan, *nodes_[h]); }));
    std::vector<HelpMessage> messages;
    for (auto& f : pending) messages.push_back(f.get());
    rec.symbols_per_helper = messages.front().symbols.size();
    rec.expected_per_helper = inst_.params.beta_for(static_cast<int>(c));
    rebuilt = repair(inst_, plan, messages);
  } else {
    std::vector<NodeContent> shares;
    for (auto h : survivors) shares.push_back(*nodes_[h]);
    rec.fallback = true;
    rec.symbols_per_helper = inst_.params.alpha;
    rec.expected_per_helper = inst_.params.alpha;
    rebuilt = repair_by_download(inst_, failing, shares);
  }
  rec.total = rec.symbols_per_helper * d;
  rec.exact = std::ranges::all_of(rebuilt, [&](const NodeContent& r) { return r == original_[r.node]; });
  for (auto& r : rebuilt) nodes_[r.node] = std::move(r);

  events_.push_back({"repair", failing, {}, rec.exact});
  ledger_.push_back(rec);
  return rec;
}

std::vector<Element> Cluster::download(const std::vector<std::size_t>& nodes) {
  require_populated();
  std::vector<NodeContent> shares;
  for (auto h : nodes) shares.push_back(share(h));
  const auto out = decode_message(inst_, moulin::download(inst_, shares));
  events_.push_back({"download", nodes, {}, out == message_});
  return out;
}

bool Cluster::check() {
  require_populated();
  auto alive = healthy_nodes();
  const auto k = static_cast<std::size_t>(inst_.k());
  bool ok = false;
  std::vector<std::string> warnings;
  if (alive.size() < k) {
    warnings.push_back("fewer than k healthy nodes");
  } else {
    std::vector<NodeContent> shares;
    for (std::size_t i = 0; i < k; ++i) shares.push_back(*nodes_[alive[i]]);
    ok = decode_message(inst_, moulin::download(inst_, shares)) == message_;
    for (auto h : alive) ok = ok && *nodes_[h] == original_[h];
  }
  events_.push_back({"check", alive, warnings, ok});
  return ok;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::size_t> parse_nodes(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty() || !std::ranges::all_of(item, [](char ch) { return ch >= '0' && ch <= '9'; }))
      throw CodingError("bad node list '" + text + "'");
    out.push_back(std::stoul(item));
  }
  if (out.empty()) throw CodingError("empty node list");
  return out;
}

std::vector<Element> parse_hex(std::string text) {
  std::erase_if(text, [](char ch) { return std::isspace(static_cast<unsigned char>(ch)); });
  if (text.size() % 2 != 0) throw CodingError("hex payload has an odd number of digits");
  std::vector<Element> out;
  for (std::size_t i = 0; i < text.size(); i += 2) {
    const auto byte = text.substr(i, 2);
    if (!std::ranges::all_of(byte, [](char ch) { return std::isxdigit(static_cast<unsigned char>(ch)); }))
      throw CodingError("bad hex digit in '" + byte + "'");
    out.push_back(static_cast<Element>(std::stoul(byte, nullptr, 16)));
  }
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CodingError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

ScenarioReport run_scenario(Cluster& cluster, const std::string& script, HelperPolicy policy) {
  std::istringstream in(script);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string cmd, arg, extra;
    if (!(words >> cmd)) continue;
    words >> arg;
    if (words >> extra) throw ScriptError(line_no, "trailing text '" + extra + "'");
    try {
      if (cmd == "STORE") {
        if (arg.empty()) throw CodingError("STORE needs a payload");
        if (arg == "random") {
          cluster.store_random();
        } else {
          auto msg = parse_hex(arg.front() == '@' ? read_text(arg.substr(1)) : arg);
          if (msg.size() > cluster.instance().params.file_size)
            throw CodingError("payload longer than M = " + std::to_string(cluster.instance().params.file_size));
          msg.resize(cluster.instance().params.file_size, 0);
          cluster.store(std::move(msg));
        }
      } else if (cmd == "FAIL") {
        cluster.fail(parse_nodes(arg));
      } else if (cmd == "REPAIR") {
        if (!arg.empty()) throw CodingError("REPAIR takes no argument");
        cluster.repair_all(policy);
      } else if (cmd == "DOWNLOAD") {
        cluster.download(parse_nodes(arg));
      } else if (cmd == "CHECK") {
        if (!arg.empty()) throw CodingError("CHECK takes no argument");
        cluster.check();
      } else {
        throw CodingError("unknown command '" + cmd + "'");
      }
    } catch (const ScriptError&) {
      throw;
    } catch (const std::exception& e) {
      throw ScriptError(line_no, e.what());
    }
  }

  ScenarioReport report;
  if (cluster.populated() && cluster.healthy_nodes().size() >= static_cast<std::size_t>(cluster.instance().k()))
    report.integrity = cluster.check();
  else if (cluster.populated())
    report.integrity = false;
  report.events = cluster.events();
  report.ledger = cluster.ledger();
  return report;
}

nlohmann::json to_json(const RepairRecord& r) {
  nlohmann::json j{{"failing", r.failing},
                   {"helpers", r.helpers},
                   {"symbols_per_helper", r.symbols_per_helper},
                   {"expected_per_helper", r.expected_per_helper},
                   {"total", r.total},
                   {"fallback", r.fallback},
                   {"exact", r.exact}};
  j["cooperative"] = r.cooperative ? nlohmann::json(*r.cooperative) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const Event& e) {
  nlohmann::json j{{"kind", e.kind}, {"nodes", e.nodes}, {"warnings", e.warnings}};
  j["ok"] = e.ok ? nlohmann::json(*e.ok) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const ScenarioReport& report) {
  nlohmann::json events = nlohmann::json::array();
  for (const auto& e : report.events) events.push_back(to_json(e));
  nlohmann::json ledger = nlohmann::json::array();
  for (const auto& r : report.ledger) ledger.push_back(to_json(r));
  nlohmann::json j{{"events", events}, {"ledger", ledger}};
  j["integrity"] = report.integrity ? nlohmann::json(*report.integrity) : nlohmann::json(nullptr);
  return j;
}

}  // namespace moulin
