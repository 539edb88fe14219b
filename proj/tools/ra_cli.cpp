// Command-line front end; talks to the core only through the C API.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "reinforce_ada.h"

namespace {

[[noreturn]] void die(const char* context) {
  std::cerr << context << ": " << ra_last_error() << "\n";
  std::exit(1);
}

void emit(const std::string& csv, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << csv;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot open for write: " << out_path << "\n";
    std::exit(1);
  }
  out << csv;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  return parts;
}

// Minimal key=value scan; the full parser lives behind the C API.
std::map<std::string, std::string> read_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot open config: " << path << "\n";
    std::exit(1);
  }
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

ra_prompt_set* load_prompts_or_die(const std::string& path) {
  ra_prompt_set* set = nullptr;
  if (ra_prompt_set_load(path.c_str(), &set) != RA_OK) die("load prompts");
  return set;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive-sampling policy-gradient simulator"};
  app.require_subcommand(1);

  // gen-prompts
  auto* gen = app.add_subcommand("gen-prompts", "Generate a synthetic prompt set");
  int gen_num = 256, gen_k = 16, gen_cmin = 0, gen_cmax = 0;
  double gen_lo = 0.05, gen_hi = 0.95;
  unsigned long long gen_seed = 1;
  std::string gen_out;
  gen->add_option("--num", gen_num, "Number of prompts");
  gen->add_option("--candidates", gen_k, "Candidates per prompt (K)");
  gen->add_option("--pass-lo", gen_lo, "Low end of the pass-rate grid");
  gen->add_option("--pass-hi", gen_hi, "High end of the pass-rate grid");
  gen->add_option("--min-correct", gen_cmin,
                  "Min correct candidates (with --max-correct overrides the grid)");
  gen->add_option("--max-correct", gen_cmax, "Max correct candidates");
  gen->add_option("--seed", gen_seed, "Generation seed");
  gen->add_option("--out", gen_out, "Output file")->required();

  // train
  auto* train = app.add_subcommand("train", "Run a training loop");
  std::string train_config, train_prompts, train_out;
  train->add_option("--config", train_config, "key=value config file")->required();
  train->add_option("--prompts", train_prompts, "Prompt set file")->required();
  train->add_option("--out", train_out, "Output directory")->required();

  // compare
  auto* compare = app.add_subcommand("compare", "Compare configs across seeds");
  std::string cmp_configs, cmp_seeds, cmp_prompts, cmp_out;
  compare->add_option("--configs", cmp_configs, "Comma-separated config files")->required();
  compare->add_option("--seeds", cmp_seeds, "Comma-separated seeds")->required();
  compare->add_option("--prompts", cmp_prompts, "Prompt set file")->required();
  compare->add_option("--out", cmp_out, "Output directory")->required();

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Closed-form diagnostics");
  analyze->require_subcommand(1);

  auto* collapse = analyze->add_subcommand("collapse", "Uniform-group probability");
  std::string col_p = "0.5", col_n = "1,2,4,8,16,32", col_out;
  collapse->add_option("--p", col_p, "Comma-separated pass rates");
  collapse->add_option("--n-list", col_n, "Comma-separated group sizes");
  collapse->add_option("--out", col_out, "Output file (default stdout)");

  auto* passk = analyze->add_subcommand("passk", "Unbiased pass@k estimates");
  int pk_n = 0, pk_c = 0;
  std::string pk_klist, pk_out;
  passk->add_option("--n", pk_n, "Samples drawn")->required();
  passk->add_option("--c", pk_c, "Correct samples")->required();
  passk->add_option("--k-list", pk_klist, "Comma-separated k values")->required();
  passk->add_option("--out", pk_out, "Output file (default stdout)");

  auto* poolsize = analyze->add_subcommand("pool-size", "Expected samples per prompt");
  std::string ps_config, ps_plist, ps_out;
  poolsize->add_option("--config", ps_config, "Config file with sampler.* keys")->required();
  poolsize->add_option("--p-list", ps_plist, "Comma-separated pass rates")->required();
  poolsize->add_option("--out", ps_out, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    ra_prompt_set* set = nullptr;
    ra_status rc;
    if (gen_cmin > 0 && gen_cmax > 0)
      rc = ra_prompt_set_generate_counts(gen_num, gen_k, gen_cmin, gen_cmax,
                                         gen_seed, &set);
    else
      rc = ra_prompt_set_generate(gen_num, gen_k, gen_lo, gen_hi, gen_seed, &set);
    if (rc != RA_OK) die("gen-prompts");
    if (ra_prompt_set_save(set, gen_out.c_str()) != RA_OK) die("save prompts");
    std::cerr << "wrote " << ra_prompt_set_size(set) << " prompts to "
              << gen_out << "\n";
    ra_prompt_set_free(set);
  } else if (train->parsed()) {
    ra_prompt_set* set = load_prompts_or_die(train_prompts);
    if (ra_train(train_config.c_str(), set, train_out.c_str()) != RA_OK)
      die("train");
    ra_prompt_set_free(set);
    std::cerr << "wrote steps.csv, ledger.csv, final_policy.txt to "
              << train_out << "\n";
  } else if (compare->parsed()) {
    const auto config_list = split_csv(cmp_configs);
    std::vector<const char*> config_ptrs;
    for (const auto& c : config_list) config_ptrs.push_back(c.c_str());
    std::vector<unsigned long long> seeds;
    for (const auto& s : split_csv(cmp_seeds)) seeds.push_back(std::stoull(s));
    ra_prompt_set* set = load_prompts_or_die(cmp_prompts);
    if (ra_compare(config_ptrs.data(), static_cast<int>(config_ptrs.size()),
                   seeds.data(), static_cast<int>(seeds.size()), set,
                   cmp_out.c_str()) != RA_OK)
      die("compare");
    ra_prompt_set_free(set);
    std::cerr << "wrote comparison.csv to " << cmp_out << "\n";
  } else if (collapse->parsed()) {
    std::ostringstream csv;
    csv << "p,n,collapse_probability\n";
    for (const auto& ps : split_csv(col_p))
      for (const auto& ns : split_csv(col_n)) {
        double v = 0.0;
        if (ra_collapse_probability(std::stod(ps), std::stoi(ns), &v) != RA_OK)
          die("analyze collapse");
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        csv << ps << ',' << ns << ',' << buf << '\n';
      }
    emit(csv.str(), col_out);
  } else if (passk->parsed()) {
    std::ostringstream csv;
    csv << "n,c,k,pass_at_k\n";
    for (const auto& ks : split_csv(pk_klist)) {
      double v = 0.0;
      if (ra_pass_at_k(pk_n, pk_c, std::stoi(ks), &v) != RA_OK)
        die("analyze passk");
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      csv << pk_n << ',' << pk_c << ',' << ks << ',' << buf << '\n';
    }
    emit(csv.str(), pk_out);
  } else if (poolsize->parsed()) {
    const auto kv = read_kv_file(ps_config);
    auto get = [&](const char* key, const std::string& fallback) {
      auto it = kv.find(key);
      return it == kv.end() ? fallback : it->second;
    };
    const int n = std::stoi(get("sampler.group_size_n", "4"));
    const int m = std::stoi(get("sampler.samples_per_round_M", "4"));
    const int rounds = std::stoi(get("sampler.num_rounds_N", "8"));
    const std::string exit = get("sampler.exit_condition", "balance");
    std::ostringstream csv;
    csv << "p,exit_condition,expected_pool_size\n";
    for (const auto& ps : split_csv(ps_plist)) {
      double v = 0.0;
      if (ra_expected_pool_size(exit.c_str(), std::stod(ps), n, m, rounds,
                                &v) != RA_OK)
        die("analyze pool-size");
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      csv << ps << ',' << exit << ',' << buf << '\n';
    }
    emit(csv.str(), ps_out);
  }
  return 0;
}
