#pragma once

// In-process cluster of n nodes: failure injection, centralized repair and a
// bandwidth ledger.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "moulin/moulin_code.hpp"
#include "json.hpp"

namespace moulin {

enum class HelperPolicy { lowest_index, random };

struct RepairRecord {
  std::vector<std::size_t> failing;
  std::vector<std::size_t> helpers;
  std::uint64_t symbols_per_helper = 0;
  std::uint64_t total = 0;
  /// beta_c for c < k, alpha for the whole-share fallback.
  std::uint64_t expected_per_helper = 0;
  bool fallback = false;
  /// Rebuilt shares equal the shares written at store time.
  bool exact = false;
  /// Cooperative bandwidth; no scheme exists for it, so it stays empty.
  std::optional<std::uint64_t> cooperative;
};

struct Event {
  std::string kind;  // store, fail, repair, download, check
  std::vector<std::size_t> nodes;
  std::vector<std::string> warnings;
  std::optional<bool> ok;
};

class Cluster {
 public:
  Cluster(CodeInstance instance, std::uint64_t seed);

  const CodeInstance& instance() const noexcept { return inst_; }
  const std::vector<Event>& events() const noexcept { return events_; }
  const std::vector<RepairRecord>& ledger() const noexcept { return ledger_; }
  bool populated() const noexcept { return !message_.empty(); }
  bool healthy(std::size_t node) const { return nodes_.at(node).has_value(); }
  std::vector<std::size_t> healthy_nodes() const;
  std::vector<std::size_t> failed_nodes() const;
  /// Share currently held by a healthy node.
  const NodeContent& share(std::size_t node) const;
  const std::vector<Element>& message() const noexcept { return message_; }

  void store(std::vector<Element> message);
  void store_random();
  /// Returns the warnings logged with the event.
  std::vector<std::string> fail(const std::vector<std::size_t>& nodes);
  RepairRecord repair_all(HelperPolicy policy = HelperPolicy::lowest_index);
  /// Message recovered from exactly the given k healthy nodes.
  std::vector<Element> download(const std::vector<std::size_t>& nodes);
  /// Downloads from the lowest k healthy nodes and compares every healthy
  /// share with the stored state.
  bool check();

 private:
  void require_populated() const;

  CodeInstance inst_;
  std::mt19937_64 rng_;
  std::vector<Element> message_;
  std::vector<NodeContent> original_;
  std::vector<std::optional<NodeContent>> nodes_;
  std::vector<Event> events_;
  std::vector<RepairRecord> ledger_;
};

/// Script failure, carrying the 1-based line of the offending command.
class ScriptError : public CodingError {
 public:
  ScriptError(std::size_t line, const std::string& what)
      : CodingError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct ScenarioReport {
  std::vector<Event> events;
  std::vector<RepairRecord> ledger;
  /// Final download equals the stored message; empty if nothing was stored.
  std::optional<bool> integrity;
};

/// Replays a script of STORE <hex>|random|@file, FAIL i,j,..., REPAIR,
/// DOWNLOAD i,j,..., CHECK lines. Blank lines and '#' comments are skipped.
ScenarioReport run_scenario(Cluster& cluster, const std::string& script,
                            HelperPolicy policy = HelperPolicy::lowest_index);

nlohmann::json to_json(const RepairRecord& record);
nlohmann::json to_json(const Event& event);
nlohmann::json to_json(const ScenarioReport& report);

}  // namespace moulin
