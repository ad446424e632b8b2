#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "moulin/code_params.hpp"
#include "moulin/share_file.hpp"
#include "moulin/storage_sim.hpp"
#include "moulin/verify.hpp"

namespace fs = std::filesystem;
using namespace moulin;
using nlohmann::json;

namespace {

std::uint64_t env_seed() {
  if (const char* s = std::getenv("MOULIN_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw ParameterError("MOULIN_SEED must be an unsigned integer");
    }
  }
  return 1;
}

std::vector<std::uint8_t> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CodingError("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CodingError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
}

std::string share_path(const std::string& dir, std::uint32_t node) {
  return (fs::path(dir) / ("share_" + std::to_string(node) + ".moul")).string();
}

std::vector<ShareFile> load_all(const std::vector<std::string>& paths) {
  std::vector<ShareFile> out;
  for (const auto& p : paths) out.push_back(load_share(p));
  return out;
}

json params_json(const CodeParams& p) {
  json bc = json::object();
  for (const auto& [c, v] : p.beta_c) bc[std::to_string(c)] = v;
  return {{"n", p.n}, {"k", p.k}, {"d", p.d}, {"s", p.s}, {"alpha", p.alpha}, {"beta", p.beta}, {"M", p.file_size},
          {"beta_c", bc}};
}

int cmd_params(int n, int k, int d, int s, int max_c, bool as_json) {
  const auto cf = closed_form_params(n, k, d, s);
  const auto og = ogf_params(n, k, d, s);
  const auto mismatches = compare_params(cf, og);
  if (max_c <= 0 || max_c > k) max_c = k;
  const double m = static_cast<double>(cf.file_size);
  if (as_json) {
    json j{{"closed_form", params_json(cf)},
           {"ogf", params_json(og)},
           {"alpha_over_M", static_cast<double>(cf.alpha) / m},
           {"beta_over_M", static_cast<double>(cf.beta) / m},
           {"mismatches", mismatches}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "n=" << n << " k=" << k << " d=" << d << " s=" << s << "\n";
    std::cout << std::left << std::setw(10) << "" << std::setw(14) << "closed form" << "ogf\n";
    auto row = [](const std::string& name, std::uint64_t a, std::uint64_t b) {
      std::cout << std::left << std::setw(10) << name << std::setw(14) << a << b << (a == b ? "" : "  MISMATCH")
                << "\n";
    };
    row("alpha", cf.alpha, og.alpha);
    row("beta", cf.beta, og.beta);
    row("M", cf.file_size, og.file_size);
    for (int c = 1; c <= max_c; ++c) row("beta_" + std::to_string(c), cf.beta_for(c), og.beta_for(c));
    std::cout << "alpha/M   " << static_cast<double>(cf.alpha) / m << "\n";
    std::cout << "beta/M    " << static_cast<double>(cf.beta) / m << "\n";
    std::cout << (mismatches.empty() ? "closed forms and ogf agree" : "closed forms and ogf DISAGREE") << "\n";
  }
  return mismatches.empty() ? 0 : 1;
}

std::vector<std::uint32_t> parse_indices(const std::string& text) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty() || !std::ranges::all_of(item, [](char c) { return c >= '0' && c <= '9'; }))
      throw ParameterError("bad index list '" + text + "'");
    out.push_back(static_cast<std::uint32_t>(std::stoul(item)));
  }
  if (out.empty()) throw ParameterError("empty index list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact-repair regenerating codes: parameters, file coding, repair and simulation"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Emit JSON on stdout");

  int n = 0, k = 0, d = 0, s = 0, max_c = 0;
  std::uint32_t modulus = default_byte_modulus;

  auto* params = app.add_subcommand("params", "Print alpha, beta, M and beta_c from closed forms and generating functions");
  params->add_option("n", n)->required();
  params->add_option("k", k)->required();
  params->add_option("d", d)->required();
  params->add_option("s", s)->required();
  params->add_option("--c", max_c, "Largest c for beta_c (default k)");

  std::string input, output, out_dir = ".";
  auto* enc = app.add_subcommand("encode", "Encode a file into n share files");
  enc->add_option("input", input)->required()->check(CLI::ExistingFile);
  enc->add_option("-n", n)->required();
  enc->add_option("-k", k)->required();
  enc->add_option("-d", d)->required();
  enc->add_option("-s", s)->required();
  enc->add_option("--modulus", modulus, "Prime field modulus, at least 257");
  enc->add_option("-o,--out-dir", out_dir, "Directory for share_<h>.moul");

  std::vector<std::string> share_paths;
  auto* dec = app.add_subcommand("decode", "Rebuild the file from k share files");
  dec->add_option("shares", share_paths)->required()->check(CLI::ExistingFile);
  dec->add_option("-o,--output", output)->required();

  std::string failed_text;
  auto* rep = app.add_subcommand("repair", "Rebuild failed shares from d helper share files");
  rep->add_option("shares", share_paths)->required()->check(CLI::ExistingFile);
  rep->add_option("-f,--failed", failed_text, "Comma-separated failed node indices")->required();
  rep->add_option("-o,--out-dir", out_dir, "Directory for rebuilt share_<f>.moul");

  std::string script_path, policy_name = "lowest";
  std::optional<std::uint64_t> seed_opt;
  auto* sim = app.add_subcommand("simulate", "Replay a failure and repair script on an in-process cluster");
  sim->add_option("script", script_path)->required()->check(CLI::ExistingFile);
  sim->add_option("-n", n)->required();
  sim->add_option("-k", k)->required();
  sim->add_option("-d", d)->required();
  sim->add_option("-s", s)->required();
  sim->add_option("--modulus", modulus, "Prime field modulus, at least 257");
  sim->add_option("--helpers", policy_name, "Helper selection: lowest or random")
      ->check(CLI::IsMember({"lowest", "random"}));
  sim->add_option("--seed", seed_opt, "RNG seed (default MOULIN_SEED or 1)");

  bool deep = false, flip = false;
  auto* ver = app.add_subcommand("verify", "Run the self-verification suites");
  ver->add_flag("--deep", deep, "Extend the grids");
  ver->add_option("--seed", seed_opt, "RNG seed (default MOULIN_SEED or 1)");
  ver->add_flag("--flip-cowedge-sign", flip)->group("");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*params) return cmd_params(n, k, d, s, max_c, as_json);

    if (*enc) {
      const auto inst = byte_instance(n, k, d, s, modulus);
      const auto shares = encode_bytes(inst, read_bytes(input));
      fs::create_directories(out_dir);
      json files = json::array();
      for (const auto& sh : shares) {
        save_share(share_path(out_dir, sh.header.node), sh);
        files.push_back(share_path(out_dir, sh.header.node));
      }
      if (as_json)
        std::cout << json{{"shares", files}, {"chunks", shares.front().header.chunks}, {"alpha", inst.params.alpha},
                          {"M", inst.params.file_size}}
                         .dump(2)
                  << "\n";
      else
        std::cout << "wrote " << shares.size() << " shares of " << shares.front().header.chunks << " chunks to "
                  << out_dir << "\n";
      return 0;
    }

    if (*dec) {
      const auto shares = load_all(share_paths);
      const auto data = decode_shares(shares);
      write_bytes(output, data);
      if (as_json)
        std::cout << json{{"output", output}, {"bytes", data.size()}}.dump(2) << "\n";
      else
        std::cout << "wrote " << data.size() << " bytes to " << output << "\n";
      return 0;
    }

    if (*rep) {
      const auto shares = load_all(share_paths);
      const auto result = repair_shares(shares, parse_indices(failed_text));
      fs::create_directories(out_dir);
      json files = json::array();
      for (const auto& sh : result.rebuilt) {
        save_share(share_path(out_dir, sh.header.node), sh);
        files.push_back(share_path(out_dir, sh.header.node));
      }
      const bool on_target = result.symbols_per_helper_per_chunk == result.expected_per_chunk;
      if (as_json) {
        std::cout << json{{"rebuilt", files},
                          {"helpers", result.helpers},
                          {"symbols_per_helper_per_chunk", result.symbols_per_helper_per_chunk},
                          {"expected_per_chunk", result.expected_per_chunk},
                          {"symbols_per_helper", result.symbols_per_helper},
                          {"total", result.symbols_per_helper * result.helpers.size()},
                          {"fallback", result.fallback}}
                         .dump(2)
                  << "\n";
      } else {
        std::cout << "helpers:";
        for (auto h : result.helpers) std::cout << " " << h;
        std::cout << "\nper helper: " << result.symbols_per_helper_per_chunk << " symbols per chunk, "
                  << result.symbols_per_helper << " in total ("
                  << (result.fallback ? "whole-share fallback, alpha = " : "beta_c = ") << result.expected_per_chunk
                  << (on_target ? ", matches" : ", MISMATCH") << ")\n";
        std::cout << "wrote " << files.size() << " rebuilt shares to " << out_dir << "\n";
      }
      return on_target ? 0 : 1;
    }

    if (*sim) {
      std::ifstream in(script_path);
      std::stringstream script;
      script << in.rdbuf();
      Cluster cluster(byte_instance(n, k, d, s, modulus), seed_opt.value_or(env_seed()));
      const auto report =
          run_scenario(cluster, script.str(), policy_name == "random" ? HelperPolicy::random : HelperPolicy::lowest_index);
      auto j = to_json(report);
      j["params"] = params_json(cluster.instance().params);
      if (as_json) {
        std::cout << j.dump(2) << "\n";
      } else {
        for (const auto& r : report.ledger)
          std::cout << "repair of " << json(r.failing).dump() << " from " << json(r.helpers).dump() << ": "
                    << r.symbols_per_helper << " symbols per helper, " << r.total << " total"
                    << (r.fallback ? " (fallback)" : "") << (r.exact ? ", exact" : ", NOT EXACT") << "\n";
        std::cout << "integrity: " << (report.integrity ? (*report.integrity ? "ok" : "FAILED") : "nothing stored")
                  << "\n";
      }
      return report.integrity.value_or(true) ? 0 : 1;
    }

    if (*ver) {
      VerifyOptions opt;
      opt.deep = deep;
      opt.seed = seed_opt.value_or(env_seed());
      opt.flip_cowedge_sign = flip;
      const auto report = run_verify(opt);
      if (as_json) {
        std::cout << to_json(report).dump(2) << "\n";
      } else {
        for (const auto& sr : report.suites) {
          std::cout << (sr.ok() ? "PASS " : "FAIL ") << sr.name << ": " << sr.checks << " checks, " << sr.failures
                    << " failures, " << std::fixed << std::setprecision(2) << sr.seconds << " s\n";
          if (sr.first_failure) std::cout << "     first failure: " << *sr.first_failure << "\n";
        }
      }
      return report.ok() ? 0 : 1;
    }
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
