// Command-line front end: thompson <group> <command> [options].
//
// Exit status: 0 on success, 1 when the input is well formed but the
// operation is undefined for it, 2 on usage errors.

#include "thompson/actiongraph.hpp"
#include "thompson/plhomeo.hpp"
#include "thompson/semiconj.hpp"
#include "thompson/transducer.hpp"
#include "thompson/velement.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace thompson;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string format = "text";
  bool format_given = false;
  std::optional<std::uint64_t> seed;
  std::size_t max_vertices = 20000;
  std::optional<int> depth;
  std::string in;
  std::string out;
};

std::string read_file(const std::string& path, const std::string& flag) {
  std::ifstream file(path);
  if (!file) throw UsageError(flag + ": cannot read '" + path + "'");
  std::stringstream ss;
  ss << file.rdbuf();
  return ss.str();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

// Parses a flag value, turning parser complaints into usage errors that name
// the flag.
template <class F>
auto parse_flag(const std::string& flag, const std::string& text, F parser) {
  try {
    return parser(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

void require_format(const Options& o, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed) {
    if (o.format == f) return;
  }
  std::string list;
  for (const char* f : allowed) list += std::string(list.empty() ? "" : ", ") + f;
  throw UsageError("--format: '" + o.format + "' is not available here (use " + list + ")");
}

std::uint64_t require_seed(const Options& o, const std::string& why) {
  if (!o.seed) throw UsageError("--seed: required for " + why);
  return *o.seed;
}

// The primary input: the flag value, or the contents of --in.
std::string primary(const Options& o, const std::string& flag, const std::string& value) {
  if (!value.empty()) return value;
  if (!o.in.empty()) return trim(read_file(o.in, "--in"));
  throw UsageError(flag + ": required (or pass --in)");
}

PrefixMap element_flag(const std::string& flag, const std::string& text) {
  return parse_flag(flag, text, [](const std::string& t) { return PrefixMap::parse(t); });
}

RationalPoint point_flag(const std::string& flag, const std::string& text) {
  if (text.empty()) throw UsageError(flag + ": required");
  return parse_flag(flag, text, [](const std::string& t) { return RationalPoint::parse(t); });
}

PLMap pl_flag(const std::string& flag, const std::string& text) {
  return parse_flag(flag, text, [](const std::string& t) { return PLMap::parse(t); });
}

Rational rational_flag(const std::string& flag, const std::string& text) {
  return parse_flag(flag, text, [](const std::string& t) { return parse_rational(t); });
}

std::vector<Rational> rational_list(const std::string& flag, const std::string& text) {
  std::vector<Rational> out;
  for (const auto& item : split(text, ',')) out.push_back(rational_flag(flag, item));
  return out;
}

Transducer machine_flag(const std::string& flag, const std::string& name) {
  if (name.empty()) throw UsageError(flag + ": required");
  const auto names = Transducer::builtin_names();
  if (std::find(names.begin(), names.end(), name) != names.end()) return Transducer::builtin(name);
  if (!std::filesystem::exists(name)) throw UsageError(flag + ": '" + name + "' is neither a built-in machine nor a file");
  return parse_flag(flag, read_file(name, flag), [](const std::string& t) { return Transducer::from_json(t); });
}

std::vector<NamedElement> generator_flags(const std::string& preset, const std::vector<std::string>& custom) {
  std::vector<NamedElement> gens;
  if (!custom.empty()) {
    for (const auto& entry : custom) {
      const auto eq = entry.find('=');
      if (eq == std::string::npos || eq == 0) throw UsageError("--gen: expected NAME=ELEMENT, got '" + entry + "'");
      gens.push_back({entry.substr(0, eq), element_flag("--gen", entry.substr(eq + 1))});
    }
  } else {
    const auto& s = standard_generators();
    if (preset == "f") {
      gens = {{"x0", s.x0}, {"x1", s.x1}};
    } else if (preset == "v") {
      gens = {{"x0", s.x0}, {"x1", s.x1}, {"swap", s.swap}, {"cycle", s.cycle}};
    } else {
      throw UsageError("--gens: expected 'f' or 'v', got '" + preset + "'");
    }
  }
  return symmetrize(std::move(gens));
}

Embedding embedding_flag(const std::string& value, const std::string& conjugate_by, int conj_depth) {
  Embedding e = value.empty() || value == "standard"
                    ? Embedding::standard()
                    : parse_flag("--embedding", read_file(value, "--embedding"),
                                 [](const std::string& t) { return Embedding::from_json(t); });
  if (!conjugate_by.empty()) {
    const auto t = machine_flag("--conjugate-by", conjugate_by);
    e.x0_image = conjugate_v_element(t, e.x0_image, conj_depth);
    e.x1_image = conjugate_v_element(t, e.x1_image, conj_depth);
  }
  return e;
}

std::string rational_pairs_json(const std::vector<std::pair<Rational, Rational>>& intervals) {
  json list = json::array();
  for (const auto& [a, b] : intervals) list.push_back({format_rational(a), format_rational(b)});
  return list.dump();
}

std::string bracket_output(const Options& o, const PhiBracket& b) {
  require_format(o, {"json", "text"});
  return o.format == "json" || !o.format_given ? b.to_json() : b.to_string();
}

using Action = std::function<std::string()>;

// ---------------------------------------------------------------- elem

void add_elem(CLI::App& app, Options& o, Action& action) {
  auto* elem = app.add_subcommand("elem", "Elements of V in the `d>r;...` grammar")->require_subcommand(1);
  static std::vector<std::string> els;
  static std::string pt;

  auto* compose_cmd = elem->add_subcommand("compose", "Compose elements left to right (leftmost acts first)");
  compose_cmd->add_option("--el", els, "Element (repeatable)")->required();
  compose_cmd->callback([=, &o, &action] {
    action = [=, &o] {
      PrefixMap g;
      for (const auto& e : els) g = compose(g, element_flag("--el", e));
      require_format(o, {"text", "json"});
      return o.format == "json" ? json{{"element", g.to_string()}}.dump() : g.to_string();
    };
  });

  auto* invert_cmd = elem->add_subcommand("invert", "Inverse element");
  invert_cmd->add_option("--el", els, "Element");
  invert_cmd->callback([=, &o, &action] {
    action = [=, &o] {
      require_format(o, {"text"});
      return invert(element_flag("--el", primary(o, "--el", els.empty() ? "" : els[0]))).to_string();
    };
  });

  auto* reduce_cmd = elem->add_subcommand("reduce", "Reduced, sorted form of a table");
  reduce_cmd->add_option("--el", els, "Element");
  reduce_cmd->callback([=, &o, &action] {
    action = [=, &o] {
      require_format(o, {"text"});
      return element_flag("--el", primary(o, "--el", els.empty() ? "" : els[0])).to_string();
    };
  });

  auto* apply_cmd = elem->add_subcommand("apply", "Image of a point");
  apply_cmd->add_option("--el", els, "Element");
  apply_cmd->add_option("--pt", pt, "Point `w(u)`")->required();
  apply_cmd->callback([=, &o, &action] {
    action = [=, &o] {
      require_format(o, {"text"});
      const auto g = element_flag("--el", primary(o, "--el", els.empty() ? "" : els[0]));
      return apply_point(g, point_flag("--pt", pt)).to_string();
    };
  });

  auto* support_cmd = elem->add_subcommand("support", "Support as cones with exceptional points");
  support_cmd->add_option("--el", els, "Element");
  support_cmd->callback([=, &o, &action] {
    action = [=, &o] {
      const auto s = support(element_flag("--el", primary(o, "--el", els.empty() ? "" : els[0])));
      require_format(o, {"text", "json"});
      if (o.format == "text") return s.to_string();
      json doc{{"cones", json::array()}, {"deleted", json::array()}, {"added", json::array()}};
      for (const auto& c : s.cones()) doc["cones"].push_back(c.to_string());
      for (const auto& p : s.deleted_points()) doc["deleted"].push_back(p.to_string());
      for (const auto& p : s.added_points()) doc["added"].push_back(p.to_string());
      return doc.dump();
    };
  });

  auto* germ_cmd = elem->add_subcommand("germ", "Germ exponent at a fixed point");
  germ_cmd->add_option("--el", els, "Element");
  germ_cmd->add_option("--pt", pt, "Fixed point")->required();
  germ_cmd->callback([=, &o, &action] {
    action = [=, &o] {
      require_format(o, {"text"});
      const auto g = element_flag("--el", primary(o, "--el", els.empty() ? "" : els[0]));
      const auto p = point_flag("--pt", pt);
      const auto germ = germ_at(g, p);
      if (!germ) throw std::domain_error("point " + p.to_string() + " is not fixed");
      return std::to_string(*germ);
    };
  });
}

// ---------------------------------------------------------------- graph

void add_graph(CLI::App& app, Options& o, Action& action) {
  auto* graph = app.add_subcommand("graph", "Orbit graphs, bands, bottlenecks, shortcuts")->require_subcommand(1);
  static std::string pt, preset = "f", g_el, h_el;
  static std::vector<std::string> custom;
  static int radius = 6, delta = 1, max_d = 3;
  static long bound = 8;
  static std::size_t pairs = 0, max_length = 8;

  auto graph_output = [&](const OrbitGraph& g) {
    require_format(o, {"dot", "json", "text"});
    if (o.format == "dot") return to_dot(g);
    if (o.format == "json") return to_json(g);
    std::ostringstream ss;
    ss << "vertices " << g.size() << "\nedges " << g.edges().size() << "\nradius " << g.radius()
       << "\ntruncated " << (g.truncated() ? "true" : "false");
    return ss.str();
  };
  auto ball = [&](bool qt) {
    const auto base = point_flag("--pt", pt);
    if (qt && custom.empty()) return build_qt_ball(base, radius);
    return build_action_graph(generator_flags(preset, custom), base, radius, o.max_vertices);
  };
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--pt", pt, "Base point `w(u)`")->required();
    cmd->add_option("--radius", radius, "Ball radius")->check(CLI::NonNegativeNumber);
  };
  auto add_gens = [&](CLI::App* cmd) {
    cmd->add_option("--gens", preset, "Generator preset: f = {x0,x1}, v = {x0,x1,swap,cycle}");
    cmd->add_option("--gen", custom, "Custom generator NAME=ELEMENT (repeatable)");
  };

  auto* qt = graph->add_subcommand("qt", "Ball in the quasi-tree of the base point");
  add_common(qt);
  qt->callback([=, &o, &action] { action = [=, &o] { return graph_output(build_qt_ball(point_flag("--pt", pt), radius)); }; });

  auto* schreier = graph->add_subcommand("schreier", "Ball of the action graph on the base orbit");
  add_common(schreier);
  add_gens(schreier);
  schreier->callback([=, &o, &action] { action = [=, &o] { return graph_output(ball(false)); }; });

  auto* bands = graph->add_subcommand("bands", "Band component statistics (QT ball unless --gen is given)");
  add_common(bands);
  bands->add_option("--gen", custom, "Custom generator NAME=ELEMENT (repeatable)");
  bands->add_option("--max-d", max_d, "Largest band width")->check(CLI::NonNegativeNumber);
  bands->callback([=, &o, &action] {
    action = [=, &o] {
      const auto g = ball(true);
      const auto rows = band_statistics(g, point_flag("--pt", pt), max_d);
      require_format(o, {"csv", "json", "text"});
      if (o.format == "csv" || o.format == "text") return band_csv(rows);
      json list = json::array();
      for (const auto& r : rows) {
        list.push_back({{"m", r.m}, {"d", r.d}, {"components", r.components}, {"max_size", r.max_size},
                        {"max_size_with_cycle", r.max_size_with_cycle}, {"violations", r.violations}});
      }
      return list.dump(2);
    };
  });

  auto* bottleneck = graph->add_subcommand("bottleneck", "Midpoint bottleneck test (QT ball unless --gen is given)");
  add_common(bottleneck);
  bottleneck->add_option("--gen", custom, "Custom generator NAME=ELEMENT (repeatable)");
  bottleneck->add_option("--delta", delta, "Ball radius removed around midpoints")->check(CLI::NonNegativeNumber);
  bottleneck->add_option("--pairs", pairs, "Random pairs (0 = all pairs; sampling needs --seed)");
  bottleneck->callback([=, &o, &action] {
    action = [=, &o] {
      PairSampling sampling;
      if (pairs > 0) sampling = PairSampling{false, pairs, require_seed(o, "sampled pairs")};
      const auto report = bottleneck_check(ball(true), delta, sampling);
      require_format(o, {"csv", "json", "text"});
      if (o.format == "csv") return bottleneck_csv(report);
      json doc{{"delta", report.delta}, {"pairs_tested", report.pairs_tested}, {"passed", report.passed},
               {"failed", report.failed}};
      doc["minimal_passing_delta"] = report.minimal_passing_delta ? json(*report.minimal_passing_delta) : json();
      if (o.format == "json") return doc.dump(2);
      std::ostringstream ss;
      ss << "pairs " << report.pairs_tested << "\npassed " << report.passed << "\nfailed " << report.failed
         << "\nminimal_passing_delta "
         << (report.minimal_passing_delta ? std::to_string(*report.minimal_passing_delta) : "none");
      return ss.str();
    };
  });

  auto* shortcut = graph->add_subcommand("shortcut", "Verified shortcuts for simple cycles of an action graph");
  add_common(shortcut);
  add_gens(shortcut);
  shortcut->add_option("--max-length", max_length, "Longest cycle examined");
  shortcut->callback([=, &o, &action] {
    action = [=, &o] {
      const auto gens = generator_flags(preset, custom);
      const auto g = build_action_graph(gens, point_flag("--pt", pt), radius, o.max_vertices);
      require_format(o, {"json", "text"});
      json list = json::array();
      std::ostringstream ss;
      std::size_t cycles = 0;
      for (const auto& cycle : simple_cycles(g, max_length)) {
        ++cycles;
        const auto s = find_shortcut(g, cycle, gens);
        if (!s) continue;
        std::string labels;
        for (const auto& l : s->labels) labels += (labels.empty() ? "" : " ") + l;
        list.push_back({{"cycle_length", cycle.size()}, {"from", g.vertices()[s->x].to_string()},
                        {"to", g.vertices()[s->y].to_string()}, {"labels", s->labels},
                        {"length", s->path.size() - 1}, {"arc_short", s->arc_short}, {"arc_long", s->arc_long}});
        ss << g.vertices()[s->x].to_string() << " -> " << g.vertices()[s->y].to_string() << " : " << labels
           << " (" << s->path.size() - 1 << " < " << s->arc_short << ")\n";
      }
      if (o.format == "json") return json{{"cycles", cycles}, {"shortcuts", list}}.dump(2);
      ss << "cycles " << cycles << "\nshortcuts " << list.size();
      return ss.str();
    };
  });

  auto* z2 = graph->add_subcommand("z2", "Stabilizer witness in the lattice of two commuting elements");
  z2->add_option("--first", g_el, "First element")->required();
  z2->add_option("--second", h_el, "Second element")->required();
  z2->add_option("--pt", pt, "Point")->required();
  z2->add_option("--bound", bound, "Lattice bound")->check(CLI::NonNegativeNumber);
  z2->callback([=, &o, &action] {
    action = [=, &o] {
      const auto w = z2_stabilizer_witness(element_flag("--first", g_el), element_flag("--second", h_el), point_flag("--pt", pt),
                                           bound);
      require_format(o, {"json", "text"});
      if (!w) return o.format == "json" ? json{{"found", false}}.dump() : std::string("none");
      if (o.format == "json") {
        return json{{"found", true},           {"n", w->n},
                    {"m", w->m},               {"n_prime", w->n_prime},
                    {"m_prime", w->m_prime},   {"element", w->element.to_string()},
                    {"nontrivial", w->nontrivial}}
            .dump(2);
      }
      std::ostringstream ss;
      ss << "(" << w->n << "," << w->m << ") ~ (" << w->n_prime << "," << w->m_prime << ") "
         << w->element.to_string() << (w->nontrivial ? " nontrivial" : " trivial");
      return ss.str();
    };
  });
}

// ---------------------------------------------------------------- trans

void add_trans(CLI::App& app, Options& o, Action& action) {
  auto* trans = app.add_subcommand("trans", "Asynchronous transducers")->require_subcommand(1);
  static std::vector<std::string> machines;
  static std::string pt, word, el;
  static bool inverse = false, reduce = false;
  static int max_n = 16;

  auto machine = [&](std::size_t i) {
    if (machines.size() <= i) {
      if (i == 0 && !o.in.empty()) {
        return parse_flag("--in", read_file(o.in, "--in"), [](const std::string& t) { return Transducer::from_json(t); });
      }
      throw UsageError("--machine: required");
    }
    return machine_flag("--machine", machines[i]);
  };

  auto* apply_cmd = trans->add_subcommand("apply", "Run a machine on a point or a finite word");
  apply_cmd->add_option("--machine", machines, "Built-in name or JSON file");
  apply_cmd->add_option("--pt", pt, "Point `w(u)`");
  apply_cmd->add_option("--word", word, "Finite binary word");
  apply_cmd->add_flag("--inverse", inverse, "Preimage of the point instead");
  apply_cmd->callback([=, &o, &action] {
    action = [=, &o] {
      const auto t = machine(0);
      require_format(o, {"text"});
      if (!word.empty() || (pt.empty() && !inverse)) {
        const auto r = apply_word(t, parse_flag("--word", word, [](const std::string& s) { return Word::parse(s); }));
        return r.output.to_string() + " " + t.state_name(r.final_state);
      }
      const auto p = point_flag("--pt", pt);
      return (inverse ? inverse_point(t, p) : apply_point(t, p)).to_string();
    };
  });

  auto* sync = trans->add_subcommand("sync", "Synchronizing level");
  sync->add_option("--machine", machines, "Built-in name or JSON file");
  sync->add_option("--max-n", max_n, "Largest level tried")->check(CLI::NonNegativeNumber);
  sync->callback([=, &o, &action] {
    action = [=, &o] {
      require_format(o, {"text", "json"});
      const auto level = synchronizing_level(machine(0), max_n);
      if (o.format == "json") return json{{"level", level ? json(*level) : json()}}.dump();
      return level ? std::to_string(*level) : std::string("none");
    };
  });

  auto* compose_cmd = trans->add_subcommand("compose", "First machine, then the second");
  compose_cmd->add_option("--machine", machines, "Built-in name or JSON file (twice)")->expected(2);
  compose_cmd->add_flag("--minimize", reduce, "Minimize the product");
  compose_cmd->callback([=, &o, &action] {
    action = [=, &o] {
      require_format(o, {"json", "text"});
      auto t = compose(machine(0), machine(1), o.max_vertices);
      if (reduce) t = minimize(t);
      return t.to_json();
    };
  });

  auto* conj = trans->add_subcommand("conjugate", "Conjugate an element of V by the machine");
  conj->add_option("--machine", machines, "Built-in name or JSON file");
  conj->add_option("--el", el, "Element")->required();
  conj->callback([=, &o, &action] {
    action = [=, &o] {
      require_format(o, {"text"});
      const auto seed = o.seed.value_or(0);
      return conjugate_v_element(machine(0), element_flag("--el", el), o.depth.value_or(24), 64, seed).to_string();
    };
  });
}

// ---------------------------------------------------------------- pl

void add_pl(CLI::App& app, Options& o, Action& action) {
  auto* pl = app.add_subcommand("pl", "Piecewise-linear homeomorphisms of [0,1]")->require_subcommand(1);
  static std::vector<std::string> maps;
  static std::string x, slopes, pairs, el, family = "f";
  static std::string den;
  static long n = 2;

  auto map = [&](std::size_t i) {
    if (maps.size() <= i) {
      if (i == 0 && !o.in.empty()) return pl_flag("--in", trim(read_file(o.in, "--in")));
      throw UsageError("--pl: required");
    }
    return pl_flag("--pl", maps[i]);
  };
  auto params = [&] {
    if (!slopes.empty()) {
      BSParams p{rational_list("--slopes", slopes),
                 den.empty() ? Integer(2) : parse_flag("--den", den, [](const std::string& t) { return Integer(t); })};
      parse_flag("--slopes", "", [&](const std::string&) {
        p.validate();
        return 0;
      });
      return p;
    }
    if (family == "f") return thompson_params();
    if (family == "stein") return stein_params();
    if (family.size() > 1 && family[0] == 'f') {
      const long k = parse_flag("--family", family.substr(1), [](const std::string& t) {
        long v = 0;
        const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || end != t.data() + t.size() || v < 2) {
          throw std::invalid_argument("expected f<n> with n >= 2");
        }
        return v;
      });
      return f_n_params(k);
    }
    throw UsageError("--family: expected f, f<n> or stein");
  };
  auto add_params = [&](CLI::App* cmd) {
    cmd->add_option("--family", family, "f, f<n> or stein");
    cmd->add_option("--slopes", slopes, "Slope generators, comma separated");
    cmd->add_option("--den", den, "Breakpoint ring Z[1/den]");
  };

  auto* eval = pl->add_subcommand("eval", "Value at a point");
  eval->add_option("--pl", maps, "Map `bp: ...; sl: ...`");
  eval->add_option("--x", x, "Point of [0,1]")->required();
  eval->callback([=, &o, &action] {
    action = [=, &o] {
      require_format(o, {"text"});
      return format_rational(evaluate(map(0), rational_flag("--x", x)));
    };
  });

  auto* compose_cmd = pl->add_subcommand("compose", "Compose maps left to right (leftmost acts first)");
  compose_cmd->add_option("--pl", maps, "Map (repeatable)")->required();
  compose_cmd->callback([=, &o, &action] {
    action = [=, &o] {
      require_format(o, {"text"});
      PLMap f;
      for (std::size_t i = 0; i < maps.size(); ++i) f = compose(f, map(i));
      return f.to_string();
    };
  });

  auto* member = pl->add_subcommand("member", "Membership in a Bieri-Strebel group");
  member->add_option("--pl", maps, "Map");
  add_params(member);
  member->callback([=, &o, &action] {
    action = [=, &o] {
      require_format(o, {"text"});
      return std::string(membership(map(0), params()) ? "true" : "false");
    };
  });

  auto* germs_cmd = pl->add_subcommand("germs", "Slopes at 0 and 1 and the support");
  germs_cmd->add_option("--pl", maps, "Map");
  germs_cmd->callback([=, &o, &action] {
    action = [=, &o] {
      const auto f = map(0);
      const auto g = germs(f);
      require_format(o, {"text", "json"});
      if (o.format == "json") {
        return json{{"initial_slope", format_rational(g.initial_slope)},
                    {"final_slope", format_rational(g.final_slope)},
                    {"support", json::parse(rational_pairs_json(support_intervals(f)))}}
            .dump();
      }
      return format_rational(g.initial_slope) + " " + format_rational(g.final_slope);
    };
  });

  auto* cyclic = pl->add_subcommand("cyclic", "Is the slope group cyclic");
  cyclic->add_option("--gens", slopes, "Slope generators, comma separated")->required();
  cyclic->callback([=, &o, &action] {
    action = [=, &o] {
      const BSParams p{rational_list("--gens", slopes), Integer(2)};
      for (const auto& g : p.slope_generators) {
        if (g <= 1) throw UsageError("--gens: generators must exceed 1");
      }
      require_format(o, {"text", "json"});
      const bool c = is_cyclic_slope_group(p);
      if (o.format == "json") {
        const auto gen = cyclic_generator(p);
        return json{{"cyclic", c}, {"generator", gen ? json(format_rational(*gen)) : json()}}.dump();
      }
      return std::string(c ? "true" : "false");
    };
  });

  auto* interp = pl->add_subcommand("interp", "Element of F_n through given points");
  interp->add_option("--pairs", pairs, "x:y pairs, comma separated, e.g. 1/2:1/4")->required();
  interp->add_option("--n", n, "Slope generator and ring Z[1/n]")->check(CLI::Range(2L, 1L << 20));
  interp->callback([=, &o, &action] {
    action = [=, &o] {
      std::vector<std::pair<Rational, Rational>> points;
      for (const auto& item : split(pairs, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw UsageError("--pairs: expected x:y, got '" + item + "'");
        points.emplace_back(rational_flag("--pairs", item.substr(0, colon)),
                            rational_flag("--pairs", item.substr(colon + 1)));
      }
      require_format(o, {"text"});
      return interpolate(points, f_n_params(n)).to_string();
    };
  });

  auto* tov = pl->add_subcommand("tov", "Element of F as a prefix table");
  tov->add_option("--pl", maps, "Map");
  tov->callback([=, &o, &action] {
    action = [=, &o] {
      require_format(o, {"text"});
      return pl_to_v(map(0)).to_string();
    };
  });

  auto* topl = pl->add_subcommand("topl", "Order-preserving element as a PL map");
  topl->add_option("--el", el, "Element");
  topl->callback([=, &o, &action] {
    action = [=, &o] {
      require_format(o, {"text"});
      return v_to_pl(element_flag("--el", primary(o, "--el", el))).to_string();
    };
  });
}

// ---------------------------------------------------------------- phi

void add_phi(CLI::App& app, Options& o, Action& action) {
  auto* phi = app.add_subcommand("phi", "Brackets for the semiconjugacy of an embedding of F (bracket by default)")
                  ->require_subcommand(0, 1);
  static std::string embedding, conjugate_by, pt, pl, points;
  static std::size_t samples = 0;

  phi->add_option("--embedding", embedding, "JSON file of generator images, or 'standard'");
  phi->add_option("--conjugate-by", conjugate_by, "Conjugate the images by a machine");
  phi->add_option("--point", pt, "Point `w(u)`");

  auto load = [&] { return embedding_flag(embedding.empty() ? o.in : embedding, conjugate_by, 24); };
  auto bracket_action = [=, &o] {
    const auto e = load();
    return bracket_output(o, phi_bracket(e, point_flag("--point", pt), o.depth.value_or(e.depth_budget)));
  };

  phi->callback([=, &action] {
    if (phi->get_subcommands().empty()) action = bracket_action;
  });
  phi->add_subcommand("bracket", "Bracket of one point")->callback([=, &action] { action = bracket_action; });

  auto* equiv = phi->add_subcommand("equivariance", "Check brackets against a PL element of F");
  equiv->add_option("--pl", pl, "Element of F (default x0)");
  equiv->add_option("--points", points, "Points, comma separated");
  equiv->add_option("--samples", samples, "Random points (needs --seed)");
  equiv->callback([=, &o, &action] {
    action = [=, &o] {
      const auto e = load();
      const PLMap f = pl.empty() ? standard_x0() : pl_flag("--pl", pl);
      std::vector<RationalPoint> list;
      for (const auto& p : split(points, ',')) list.push_back(point_flag("--points", p));
      if (samples > 0) {
        Rng rng(require_seed(o, "--samples"));
        for (std::size_t i = 0; i < samples; ++i) list.push_back(random_point(rng, 5, 4));
      }
      if (list.empty()) throw UsageError("--points: give points or --samples");
      const auto report = verify_equivariance(e, f, list, o.depth.value_or(e.depth_budget));
      require_format(o, {"json", "text"});
      if (o.format == "json" || !o.format_given) return report.to_json();
      std::ostringstream ss;
      ss << "checked " << report.checked << "\ninconclusive " << report.inconclusive << "\nviolations "
         << report.violations.size();
      return ss.str();
    };
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations in Thompson's groups F and V"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"dot", "json", "csv", "text"}));
  app.add_option("--seed", o.seed, "Seed for randomized commands");
  app.add_option("--max-vertices", o.max_vertices, "Vertex or state bound for graph and product constructions");
  app.add_option("--depth", o.depth, "Depth budget")->check(CLI::NonNegativeNumber);
  app.add_option("--in", o.in, "Read the primary input from a file");
  app.add_option("--out", o.out, "Write the result to a file");

  Action action;
  add_elem(app, o, action);
  add_graph(app, o, action);
  add_trans(app, o, action);
  add_pl(app, o, action);
  add_phi(app, o, action);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  o.format_given = app.count("--format") > 0;
  try {
    const std::string result = action();
    if (o.out.empty()) {
      std::cout << result << (result.empty() || result.back() == '\n' ? "" : "\n");
    } else {
      std::ofstream file(o.out);
      if (!file) throw UsageError("--out: cannot write '" + o.out + "'");
      file << result << (result.empty() || result.back() == '\n' ? "" : "\n");
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
