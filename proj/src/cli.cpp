#include "nichols/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "nichols/cartan.hpp"
#include "nichols/criteria.hpp"
#include "nichols/diagram.hpp"
#include "nichols/hlist.hpp"
#include "nichols/pipeline.hpp"
#include "nichols/weyl.hpp"

namespace nichols {

namespace {

using json = nlohmann::ordered_json;

struct CliConfig {
  std::string hlist;
  std::string scenarios;
  std::string format = "text";
  int threads = 1;
  size_t max_roots = Caps{}.max_roots;
  size_t max_members = Caps{}.max_members;
  uint64_t seed = 1;

  Caps caps() const { return Caps{max_members, max_roots}; }
  bool as_json() const { return format == "json"; }
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Diagram parse_arg(const std::string& text) {
  try {
    return parse_diagram(text);
  } catch (const std::exception& e) {
    throw UsageError(std::string("cannot parse diagram: ") + e.what());
  }
}

HlistDb load_db(const CliConfig& cfg) {
  try {
    return load_hlist(resolve_hlist_path(cfg.hlist));
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

std::string roots_label(const RootSystemResult& r) {
  if (r.finite()) return "Finite(" + std::to_string(r.positive_roots.size()) + ")";
  return status_name(r.status);
}

json root_json(const Root& r, int rank) {
  json a = json::array();
  for (int i = 0; i < rank; ++i) a.push_back(r[i]);
  return a;
}

int cmd_cartan(const CliConfig& cfg, const Diagram& d, std::ostream& out) {
  auto cm = cartan_matrix(d);
  auto ct = is_cartan_type(d);
  if (cfg.as_json()) {
    json j;
    j["diagram"] = d.str();
    if (cm.ok()) {
      j["matrix"] = cm.matrix->rows();
      auto ft = gcm_finite_type(*cm.matrix);
      j["finite_type"] = ft.finite ? json(ft.name) : json(nullptr);
      j["cartan_type"] = ct.value_or(false);
    } else {
      j["matrix"] = nullptr;
      j["failing_vertex"] = cm.failing_vertex + 1;
    }
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  if (!cm.ok()) {
    out << "Cartan matrix undefined: vertex " << cm.failing_vertex + 1 << " is not reflectable\n";
    return kExitOk;
  }
  for (const auto& row : cm.matrix->rows()) {
    for (size_t k = 0; k < row.size(); ++k) out << (k ? " " : "") << row[k];
    out << "\n";
  }
  auto ft = gcm_finite_type(*cm.matrix);
  out << "finite type: " << (ft.finite ? ft.name : "no") << "\n";
  out << "Cartan type: " << (ct.value_or(false) ? "yes" : "no") << "\n";
  return kExitOk;
}

int cmd_reflect(const CliConfig& cfg, const Diagram& d, int vertex, std::ostream& out, std::ostream& err) {
  if (vertex < 1 || vertex > d.rank()) throw UsageError("vertex out of range: " + std::to_string(vertex));
  try {
    Diagram r = reflect(d, vertex - 1);
    if (cfg.as_json()) {
      out << json{{"diagram", d.str()}, {"vertex", vertex}, {"reflection", r.str()}}.dump(2) << "\n";
    } else {
      out << r.str() << "\n";
    }
    return kExitOk;
  } catch (const NotReflectable& e) {
    err << e.what() << "\n";
    return kExitFailure;
  }
}

int cmd_orbit(const CliConfig& cfg, const Diagram& d, std::ostream& out) {
  auto o = orbit(d, cfg.caps());
  const char* status = o.status == OrbitStatus::Complete      ? "Complete"
                       : o.status == OrbitStatus::CapExceeded ? "CapExceeded"
                                                              : "NotAllReflections";
  if (cfg.as_json()) {
    json j;
    j["status"] = status;
    j["size"] = o.members.size();
    j["members"] = json::array();
    for (const auto& m : o.members) j["members"].push_back(m.str());
    if (o.failing_member >= 0) {
      j["failing_member"] = o.failing_member;
      j["failing_vertex"] = o.failing_vertex + 1;
    }
    out << j.dump(2) << "\n";
  } else {
    out << status << ", " << o.members.size() << " objects\n";
    for (const auto& m : o.members) out << "  " << m.str() << "\n";
    if (o.failing_member >= 0)
      out << "not reflectable: object " << o.failing_member << " at vertex " << o.failing_vertex + 1 << "\n";
  }
  return kExitOk;
}

int cmd_roots(const CliConfig& cfg, const Diagram& d, std::ostream& out) {
  auto r = positive_roots(d, cfg.caps());
  if (cfg.as_json()) {
    json j;
    j["status"] = status_name(r.status);
    j["orbit_size"] = r.orbit_size;
    if (r.finite()) {
      j["count"] = r.positive_roots.size();
      j["roots"] = json::array();
      for (const auto& x : r.positive_roots) j["roots"].push_back(root_json(x, d.rank()));
    }
    if (!r.note.empty()) j["note"] = r.note;
    out << j.dump(2) << "\n";
  } else {
    out << roots_label(r) << " (" << r.orbit_size << " objects)\n";
    for (const auto& x : r.positive_roots) out << "  " << root_str(x, d.rank()) << "\n";
    if (!r.note.empty()) out << r.note << "\n";
  }
  return kExitOk;
}

int cmd_classify(const CliConfig& cfg, const Diagram& d, std::ostream& out) {
  auto db = load_db(cfg);
  std::string member;
  if (d.rank() > 7) {
    member = "rank not covered by the list";
  } else {
    member = membership(db, d).str();
  }
  auto r = positive_roots(d, cfg.caps());
  if (cfg.as_json()) {
    out << json{{"diagram", d.str()},
                {"shape", classify_shape(d).name()},
                {"membership", member},
                {"roots", roots_label(r)}}
               .dump(2)
        << "\n";
  } else {
    out << member << "\n" << roots_label(r) << "\n";
  }
  return kExitOk;
}

std::vector<int> complete_sigma(std::vector<int> sigma, int rank) {
  for (int v = 0; v < rank; ++v)
    if (std::find(sigma.begin(), sigma.end(), v) == sigma.end()) sigma.push_back(v);
  return sigma;
}

int cmd_crit(const CliConfig& cfg, char c, const std::vector<int>& raw, const Diagram& d, std::ostream& out) {
  auto db = load_db(cfg);
  std::vector<CriteriumImage> images;
  if (!raw.empty()) {
    std::vector<int> idx;
    for (size_t k = 0; k < raw.size(); ++k) idx.push_back(criterium_index_is_vertex(c, k) ? raw[k] - 1 : raw[k]);
    auto need = [&](size_t n) {
      if (idx.size() != n)
        throw UsageError(std::string("criterium ") + c + " takes " + std::to_string(n) + " indices");
    };
    try {
      Diagram img;
      switch (c) {
        case 'A': need(3); img = criterium_A(d, idx[0], idx[1], idx[2]); break;
        case 'B': need(3); img = criterium_B(d, idx[0], idx[1], idx[2]); break;
        case 'C': need(0); img = criterium_C(d); break;
        case 'D': need(6); img = criterium_D(d, {idx.begin(), idx.begin() + 4}, idx[4], idx[5]); break;
        case 'E': need(7); img = criterium_E(d, {idx.begin(), idx.begin() + 4}, idx[4], idx[5], idx[6]); break;
        default: idx = complete_sigma(idx, d.rank()); img = criterium_F(d, idx); break;
      }
      images.push_back({c, idx, img});
    } catch (const CriteriumError& e) {
      throw UsageError(e.what());
    }
  } else {
    images = criterium_images(d, c);
  }
  auto index_str = [&](const CriteriumImage& im) {
    std::string s = "(";
    for (size_t k = 0; k < im.indices.size(); ++k) {
      if (k) s += ",";
      s += std::to_string(criterium_index_is_vertex(c, k) ? im.indices[k] + 1 : im.indices[k]);
    }
    return s + ")";
  };
  bool all_in = true;
  json arr = json::array();
  std::ostringstream text;
  for (const auto& im : images) {
    bool in = in_hlist(db, im.image, MembershipMode::Full);
    all_in = all_in && in;
    if (cfg.as_json()) {
      arr.push_back({{"indices", index_str(im)}, {"image", im.image.str()}, {"in_hlist", in}});
    } else {
      text << c << index_str(im) << ": " << im.image.str() << (in ? "  in list" : "  NOT in list") << "\n";
    }
  }
  std::string verdict = images.empty() ? "no admissible indices" : all_in ? "Survives" : "Fails";
  if (cfg.as_json()) {
    out << json{{"diagram", d.str()}, {"criterium", std::string(1, c)}, {"images", arr}, {"verdict", verdict}}.dump(2)
        << "\n";
  } else {
    out << text.str() << verdict << "\n";
  }
  return kExitOk;
}

PipelineReport validation_report(const HlistDb& db, const Caps& caps) {
  auto t0 = std::chrono::steady_clock::now();
  auto v = hlist_validate(db, caps);
  PipelineReport rep;
  rep.scenario = "hlist-validate";
  std::map<std::string, size_t> issues;
  for (const auto& i : v.issues) {
    ++issues[i.check];
    rep.caveats.push_back(i.check + " " + i.row + ": " + i.detail + " " + i.diagram);
  }
  for (const auto& [check, n] : v.checked) {
    StepCount s;
    s.name = check;
    s.in = n;
    s.out = n - issues[check];
    s.expected = static_cast<long>(n);
    rep.steps.push_back(s);
    if (issues[check]) rep.mismatches.push_back(check);
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

void print_report(const CliConfig& cfg, const PipelineReport& r, std::ostream& out) {
  if (cfg.as_json()) {
    out << r.json() << "\n";
  } else {
    out << r.text() << "\n";
  }
}

int cmd_scenario(const CliConfig& cfg, const std::string& name, bool all, std::ostream& out) {
  auto db = load_db(cfg);
  std::vector<Scenario> catalog;
  std::string dir;
  try {
    dir = resolve_scenario_dir(cfg.scenarios);
    catalog = load_catalog(dir);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  PipelineOptions opts;
  opts.threads = cfg.threads;

  std::vector<PipelineReport> reports;
  bool ok = true;
  auto run_validation = [&] {
    reports.push_back(validation_report(db, cfg.caps()));
    ok = ok && reports.back().mismatches.empty();
  };
  if (all) {
    for (const auto& s : catalog) {
      reports.push_back(run_scenario(s, db, opts));
      ok = ok && reports.back().sound();
    }
    run_validation();
  } else if (name == "hlist-validate") {
    run_validation();
  } else {
    auto it = std::find_if(catalog.begin(), catalog.end(), [&](const Scenario& s) { return s.name == name; });
    if (it == catalog.end()) throw UsageError("unknown scenario '" + name + "' (catalog: " + dir + ")");
    reports.push_back(run_scenario(*it, db, opts));
    ok = reports.back().sound();
  }
  if (cfg.as_json() && reports.size() > 1) {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(json::parse(r.json()));
    out << arr.dump(2) << "\n";
  } else {
    for (const auto& r : reports) print_report(cfg, r, out);
  }
  return ok ? kExitOk : kExitFailure;
}

int cmd_validate(const CliConfig& cfg, std::ostream& out) {
  auto db = load_db(cfg);
  auto v = hlist_validate(db, cfg.caps());
  if (cfg.as_json()) {
    json j;
    j["ok"] = v.ok();
    j["checked"] = v.checked;
    j["issues"] = json::array();
    for (const auto& i : v.issues)
      j["issues"].push_back({{"check", i.check}, {"row", i.row}, {"diagram", i.diagram}, {"detail", i.detail}});
    out << j.dump(2) << "\n";
  } else {
    for (const auto& [check, n] : v.checked) out << check << ": " << n << " checked\n";
    for (const auto& i : v.issues) out << "issue " << i.check << " " << i.row << ": " << i.detail << " " << i.diagram << "\n";
    out << (v.ok() ? "ok" : "FAILED") << "\n";
  }
  return v.ok() ? kExitOk : kExitFailure;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  CLI::App app{"Nichols algebras of diagonal type: Weyl groupoids, the classification list and its filters", "nichols"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.add_option("--hlist", cfg.hlist, "Classification list directory or file (default: $NICHOLS_HLIST, then data/hlist)");
  app.add_option("--scenarios", cfg.scenarios, "Scenario catalog directory (default: data/scenarios)");
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--threads", cfg.threads, "Worker threads for pipelines")->check(CLI::PositiveNumber);
  app.add_option("--max-roots", cfg.max_roots, "Root enumeration cap")->check(CLI::PositiveNumber);
  app.add_option("--max-members", cfg.max_members, "Weyl groupoid object cap")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Seed for randomized commands");
  app.fallthrough();

  std::string diagram;
  int vertex = 0;
  std::string crit_name;
  std::vector<std::string> crit_args;
  std::string scenario_name;
  bool scenario_all = false;

  auto* c_cartan = app.add_subcommand("cartan", "Print the generalized Cartan matrix");
  c_cartan->add_option("diagram", diagram)->required();
  auto* c_reflect = app.add_subcommand("reflect", "Reflect a diagram at a vertex");
  c_reflect->add_option("-i,--vertex", vertex, "Vertex (1-based)")->required();
  c_reflect->add_option("diagram", diagram)->required();
  auto* c_orbit = app.add_subcommand("orbit", "List the Weyl groupoid objects reachable by reflections");
  c_orbit->add_option("diagram", diagram)->required();
  auto* c_roots = app.add_subcommand("roots", "Positive roots of the root system");
  c_roots->add_option("diagram", diagram)->required();
  auto* c_classify = app.add_subcommand("classify", "List membership and root system finiteness");
  c_classify->add_option("diagram", diagram)->required();
  auto* c_crit = app.add_subcommand("crit", "Apply a criterium (A..F), optionally at given 1-based indices");
  c_crit->add_option("criterium", crit_name)->required()->check(CLI::IsMember({"A", "B", "C", "D", "E", "F"}));
  c_crit->add_option("args", crit_args, "Indices followed by the diagram")->required();
  auto* c_scenario = app.add_subcommand("scenario", "Run a scenario from the catalog");
  c_scenario->add_option("name", scenario_name);
  c_scenario->add_flag("--all", scenario_all, "Run every scenario and the list validation");
  auto* c_validate = app.add_subcommand("validate-hlist", "Validate the classification list data");

  // CLI11 wants argv order reversed in a vector.
  std::vector<std::string> rev(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rev.begin(), rev.end());

  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (c_cartan->parsed()) return cmd_cartan(cfg, parse_arg(diagram), out);
    if (c_reflect->parsed()) return cmd_reflect(cfg, parse_arg(diagram), vertex, out, err);
    if (c_orbit->parsed()) return cmd_orbit(cfg, parse_arg(diagram), out);
    if (c_roots->parsed()) return cmd_roots(cfg, parse_arg(diagram), out);
    if (c_classify->parsed()) return cmd_classify(cfg, parse_arg(diagram), out);
    if (c_crit->parsed()) {
      // The diagram is the last positional; the ones before it are indices.
      std::vector<int> idx;
      for (size_t k = 0; k + 1 < crit_args.size(); ++k) {
        try {
          size_t used = 0;
          idx.push_back(std::stoi(crit_args[k], &used));
          if (used != crit_args[k].size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
          throw UsageError("crit: bad index '" + crit_args[k] + "'");
        }
      }
      return cmd_crit(cfg, crit_name[0], idx, parse_arg(crit_args.back()), out);
    }
    if (c_scenario->parsed()) {
      if (!scenario_all && scenario_name.empty()) throw UsageError("scenario: give a name or --all");
      return cmd_scenario(cfg, scenario_name, scenario_all, out);
    }
    if (c_validate->parsed()) return cmd_validate(cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const HlistLoadError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace nichols
