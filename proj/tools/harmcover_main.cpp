#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "harmcover.h"
#include "json.hpp"

using nlohmann::json;

namespace {

struct Failure {
  hc_status status;
  std::string message;
};

void check(hc_status s) {
  if (s != HC_OK) throw Failure{s, hc_last_error()};
}

void usage(const std::string& msg) { throw Failure{HC_ERR_ARGUMENT, msg}; }

int exitCode(hc_status s) {
  switch (s) {
    case HC_OK:
      return 0;
    case HC_ERR_ARGUMENT:
    case HC_ERR_INDEX:
    case HC_ERR_IO:
      return 2;
    case HC_ERR_PRECONDITION:
    case HC_ERR_COVERAGE:
    case HC_ERR_CONSTRUCTION:
      return 3;
    case HC_ERR_RESOLUTION:
      return 4;
    default:
      return 1;
  }
}

struct Text {
  char* p = nullptr;
  ~Text() { hc_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

template <class T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
};
using Covering = Handle<hc_covering, hc_covering_free>;
using Weight = Handle<hc_weight, hc_weight_free>;
using Signal = Handle<hc_signal, hc_signal_free>;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{HC_ERR_IO, "cannot open " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool looksLikeJson(const std::string& s) {
  auto k = s.find_first_not_of(" \t\r\n");
  return k != std::string::npos && (s[k] == '{' || s[k] == '[');
}

/// Inline JSON or a path to a JSON file.
json jsonArg(const std::string& arg) {
  std::string text = looksLikeJson(arg) ? arg : slurp(arg);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Failure{HC_ERR_ARGUMENT, arg + ": " + e.what()};
  }
}

void loadCovering(const std::string& path, Covering& c) { check(hc_covering_read(slurp(path).c_str(), &c.p)); }

std::pair<int, double> parseGrid(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos) usage("--grid expects N,L");
  try {
    return {std::stoi(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  } catch (const std::exception&) {
    usage("--grid expects N,L");
  }
  return {};
}

std::pair<int, int> parseRange(const std::string& s, bool symmetric) {
  try {
    auto colon = s.find(':');
    if (colon == std::string::npos) {
      int v = std::stoi(s);
      return symmetric ? std::pair{-v, v} : std::pair{v, v};
    }
    return {std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
  } catch (const std::exception&) {
    usage("range expects A:B or a single integer");
  }
  return {};
}

struct GridOpt {
  std::string grid;
  int dim = 0;

  json spec(int fallbackDim) const {
    int d = dim ? dim : fallbackDim;
    if (grid.empty()) return d == 1 ? json{{"d", 1}, {"L", 64.0}, {"N", 4096}} : json{{"d", d}, {"L", 32.0}, {"N", 256}};
    auto [N, L] = parseGrid(grid);
    return {{"d", d}, {"L", L}, {"N", N}};
  }
};

/// --signal: analytic spec (inline or file) or a raw complex64 file on the given grid.
void loadSignal(const std::string& arg, const json& grid, const hc_covering* cov, Signal& s) {
  std::string g = grid.dump();
  if (arg.empty()) {
    json center = json::array();
    for (int a = 0; a < grid.at("d").get<int>(); ++a) center.push_back(0.0);
    json spec{{"kind", "gaussian"}, {"center", center}, {"width", 2.0}};
    check(hc_signal_create(spec.dump().c_str(), g.c_str(), cov, &s.p));
    return;
  }
  if (looksLikeJson(arg)) {
    check(hc_signal_create(arg.c_str(), g.c_str(), cov, &s.p));
    return;
  }
  std::ifstream probe(arg, std::ios::binary);
  if (!probe) throw Failure{HC_ERR_IO, "cannot open " + arg};
  char first = 0;
  probe >> std::ws;
  probe.get(first);
  if (first == '{') {
    std::string text = slurp(arg);
    check(hc_signal_create(text.c_str(), g.c_str(), cov, &s.p));
  } else {
    check(hc_signal_read_raw(arg.c_str(), g.c_str(), &s.p));
  }
}

void putExponent(json& o, const char* key, const std::string& v) {
  if (v.empty()) return;
  try {
    std::size_t used = 0;
    double x = std::stod(v, &used);
    if (used == v.size() && std::isfinite(x)) {
      o[key] = x;
      return;
    }
  } catch (const std::exception&) {
  }
  o[key] = v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decomposition spaces, coverings and embeddings"};
  app.require_subcommand(1);
  std::string out;
  int seed = 0;
  app.add_option("--out", out, "Write the report here instead of standard output");
  app.add_option("--seed", seed, "Seed for randomized sampling")->capture_default_str();

  json report;
  std::function<void()> action;

  // covering
  auto* covering = app.add_subcommand("covering", "Build or check coverings");
  covering->require_subcommand(1);
  auto* cbuild = covering->add_subcommand("build", "Construct a zoo covering");
  std::string family;
  int dim = 1, trunc = -1;
  double alpha = 0.5, radius = 0.0, cc = 0.5, delta = 1.0;
  std::string jrange, krange;
  cbuild->add_option("--family", family)->required()->check(CLI::IsMember({"uniform", "dyadic", "alpha", "shearlet"}));
  cbuild->add_option("--dim", dim);
  cbuild->add_option("--trunc", trunc, "Truncation (|k| bound, dyadic nMax, alpha radius, shear bound)");
  cbuild->add_option("--alpha", alpha);
  cbuild->add_option("--radius", radius);
  cbuild->add_option("--c", cc);
  cbuild->add_option("--delta", delta);
  cbuild->add_option("--jrange", jrange, "Scale range A:B (shearlet)");
  cbuild->add_option("--krange", krange, "Shear bound K or -K:K (shearlet)");
  cbuild->callback([&] {
    action = [&] {
      json spec{{"family", family}, {"dim", family == "shearlet" && dim == 1 ? 2 : dim}};
      if (trunc >= 0) spec["trunc"] = trunc;
      spec["alpha"] = alpha;
      spec["c"] = cc;
      spec["delta"] = delta;
      if (radius > 0.0) spec["radius"] = radius;
      if (!jrange.empty()) {
        auto [a, b] = parseRange(jrange, false);
        spec["jmin"] = a;
        spec["jmax"] = b;
      }
      if (!krange.empty()) {
        auto [a, b] = parseRange(krange, true);
        if (a != -b) usage("--krange must be symmetric");
        spec["kmax"] = b;
      }
      Covering c;
      check(hc_covering_build(spec.dump().c_str(), &c.p));
      Text t;
      check(hc_covering_write(c.p, &t.p));
      report = json::parse(t.str());
    };
  });
  auto* ccheck = covering->add_subcommand("check", "Constants and sampled coverage of a covering");
  std::string covPath;
  int perAxis = 0, randomCount = 0;
  double blind = 0.0;
  ccheck->add_option("--covering", covPath)->required();
  ccheck->add_option("--per-axis", perAxis);
  ccheck->add_option("--random-count", randomCount);
  ccheck->add_option("--blind-margin", blind);
  ccheck->callback([&] {
    action = [&] {
      Covering c;
      loadCovering(covPath, c);
      json o{{"seed", seed}, {"blindMargin", blind}};
      if (perAxis) o["perAxis"] = perAxis;
      if (randomCount) o["randomCount"] = randomCount;
      Text t;
      check(hc_covering_check(c.p, o.dump().c_str(), &t.p));
      report = json::parse(t.str());
    };
  });

  // relate
  auto* relate = app.add_subcommand("relate", "Intersection sets, subordinateness and moderateness");
  std::string finePath, coarsePath, weightPath;
  relate->add_option("--fine", finePath)->required();
  relate->add_option("--coarse", coarsePath)->required();
  relate->add_option("--weight", weightPath, "Weight spec on the fine covering");
  relate->callback([&] {
    action = [&] {
      Covering f, c;
      loadCovering(finePath, f);
      loadCovering(coarsePath, c);
      Weight w;
      if (!weightPath.empty()) check(hc_weight_create(jsonArg(weightPath).dump().c_str(), f.p, &w.p));
      Text t;
      check(hc_relate(f.p, c.p, w.p, &t.p));
      report = json::parse(t.str());
    };
  });

  // embed
  auto* embed = app.add_subcommand("embed", "Embedding decisions");
  embed->require_subcommand(1);
  std::string p1 = "2", q1 = "2", p2 = "2", q2 = "2";
  auto exponents = [&](CLI::App* a) {
    a->add_option("--p1", p1);
    a->add_option("--q1", q1);
    a->add_option("--p2", p2);
    a->add_option("--q2", q2);
  };
  auto* ealpha = embed->add_subcommand("alpha", "Alpha-modulation space embeddings");
  double ea = 0, eb = 0, s1 = 0, s2 = 0;
  int ed = 1;
  std::string direction = "forward";
  ealpha->add_option("--alpha", ea);
  ealpha->add_option("--beta", eb);
  ealpha->add_option("--s1", s1);
  ealpha->add_option("--s2", s2);
  ealpha->add_option("--d", ed);
  ealpha->add_option("--direction", direction);
  exponents(ealpha);
  ealpha->callback([&] {
    action = [&] {
      json q{{"alpha", ea}, {"beta", eb}, {"s1", s1}, {"s2", s2}, {"d", ed}, {"direction", direction}};
      putExponent(q, "p1", p1);
      putExponent(q, "q1", q1);
      putExponent(q, "p2", p2);
      putExponent(q, "q2", q2);
      Text t;
      check(hc_embed_alpha(q.dump().c_str(), &t.p));
      report = json::parse(t.str());
    };
  });
  auto* egeneral = embed->add_subcommand("general", "Embeddings between decomposition spaces of two coverings");
  std::string srcPath, tgtPath, wsrc, wtgt, finer = "source", csvPath;
  egeneral->add_option("--source", srcPath)->required();
  egeneral->add_option("--target", tgtPath)->required();
  egeneral->add_option("--wsource", wsrc);
  egeneral->add_option("--wtarget", wtgt);
  egeneral->add_option("--fine", finer, "Which covering is the finer one")->check(CLI::IsMember({"source", "target"}));
  egeneral->add_option("--csv", csvPath, "Write the per-truncation constant trace");
  exponents(egeneral);
  egeneral->callback([&] {
    action = [&] {
      Covering s, t;
      loadCovering(srcPath, s);
      loadCovering(tgtPath, t);
      Weight ws, wt;
      if (!wsrc.empty()) check(hc_weight_create(jsonArg(wsrc).dump().c_str(), s.p, &ws.p));
      if (!wtgt.empty()) check(hc_weight_create(jsonArg(wtgt).dump().c_str(), t.p, &wt.p));
      json q{{"fine", finer}};
      putExponent(q, "p1", p1);
      putExponent(q, "q1", q1);
      putExponent(q, "p2", p2);
      putExponent(q, "q2", q2);
      Text v, csv;
      check(hc_embed_general(s.p, t.p, ws.p, wt.p, q.dump().c_str(), &v.p, &csv.p));
      report = json::parse(v.str());
      if (!csvPath.empty()) {
        std::ofstream os(csvPath);
        os << csv.str();
        if (!os) throw Failure{HC_ERR_IO, "cannot write " + csvPath};
      }
    };
  });
  auto* esb = embed->add_subcommand("shearlet-besov", "Shearlet smoothness spaces into Besov spaces");
  double sc = 0.5, sa = 0, sbeta = 0, sg = 0;
  esb->add_option("--c", sc);
  esb->add_option("--alpha", sa);
  esb->add_option("--beta", sbeta);
  esb->add_option("--gamma", sg);
  exponents(esb);
  esb->callback([&] {
    action = [&] {
      json q{{"c", sc}, {"alpha", sa}, {"beta", sbeta}, {"gamma", sg}};
      putExponent(q, "p1", p1);
      putExponent(q, "q1", q1);
      putExponent(q, "p2", p2);
      putExponent(q, "q2", q2);
      Text t;
      check(hc_embed_shearlet_besov(q.dump().c_str(), &t.p));
      report = json::parse(t.str());
    };
  });

  // norm
  auto* norm = app.add_subcommand("norm", "Decomposition space norm of a signal");
  std::string signalArg, pStr = "2", qStr = "2", profile;
  double shrink = 0.7;
  GridOpt grid;
  norm->add_option("--covering", covPath)->required();
  norm->add_option("--weight", weightPath);
  norm->add_option("--p", pStr);
  norm->add_option("--q", qStr);
  norm->add_option("--signal", signalArg);
  norm->add_option("--grid", grid.grid, "N,L");
  norm->add_option("--shrink", shrink);
  norm->add_option("--profile", profile);
  norm->callback([&] {
    action = [&] {
      Covering c;
      loadCovering(covPath, c);
      int d = json::parse(slurp(covPath)).value("dim", 1);
      Signal s;
      loadSignal(signalArg, grid.spec(d), c.p, s);
      Weight w;
      if (!weightPath.empty()) check(hc_weight_create(jsonArg(weightPath).dump().c_str(), c.p, &w.p));
      json o{{"shrink", shrink}};
      putExponent(o, "p", pStr);
      putExponent(o, "q", qStr);
      if (!profile.empty()) o["profile"] = profile;
      Text t;
      check(hc_norm(s.p, c.p, w.p, o.dump().c_str(), &t.p));
      report = json::parse(t.str());
    };
  });

  // phitransform
  auto* phi = app.add_subcommand("phitransform", "Dyadic-cube analysis and synthesis");
  std::string phiAction, kind = "b", coefPath, rawOut;
  int numax = -1;
  double sm = 0.0;
  phi->add_option("action", phiAction)->required()->check(CLI::IsMember({"analyze", "synthesize", "roundtrip", "norm"}));
  phi->add_option("--grid", grid.grid, "N,L");
  phi->add_option("--dim", grid.dim);
  phi->add_option("--numax", numax);
  phi->add_option("--kind", kind)->check(CLI::IsMember({"f", "b"}));
  phi->add_option("--s", sm);
  phi->add_option("--p", pStr);
  phi->add_option("--q", qStr);
  phi->add_option("--signal", signalArg);
  phi->add_option("--coefficients", coefPath, "Coefficient file for synthesize/norm");
  phi->add_option("--raw-out", rawOut, "Raw output of synthesize");
  phi->add_option("--profile", profile);
  phi->callback([&] {
    action = [&] {
      json g = grid.spec(1);
      json o{{"kind", kind}, {"s", sm}};
      if (numax >= 0) o["numax"] = numax;
      putExponent(o, "p", pStr);
      putExponent(o, "q", qStr);
      if (!profile.empty()) o["profile"] = profile;
      std::string os = o.dump(), gs = g.dump();
      Text t;
      if (phiAction == "synthesize" || (phiAction == "norm" && !coefPath.empty())) {
        if (coefPath.empty()) usage("synthesize needs --coefficients");
        std::string coef = slurp(coefPath);
        if (phiAction == "norm") {
          check(hc_phi_norm(nullptr, coef.c_str(), gs.c_str(), os.c_str(), &t.p));
          report = json::parse(t.str());
          return;
        }
        Signal s;
        check(hc_phi_synthesize(coef.c_str(), gs.c_str(), os.c_str(), &s.p));
        if (!rawOut.empty()) check(hc_signal_write_raw(s.p, rawOut.c_str()));
        check(hc_signal_info(s.p, &t.p));
        report = json::parse(t.str());
        if (!rawOut.empty()) report["written"] = rawOut;
        return;
      }
      Signal s;
      loadSignal(signalArg, g, nullptr, s);
      if (phiAction == "analyze")
        check(hc_phi_analyze(s.p, os.c_str(), &t.p));
      else if (phiAction == "roundtrip")
        check(hc_phi_roundtrip(s.p, os.c_str(), &t.p));
      else
        check(hc_phi_norm(s.p, nullptr, nullptr, os.c_str(), &t.p));
      report = json::parse(t.str());
    };
  });

  // frame
  auto* frame = app.add_subcommand("frame", "Tight frames on structured coverings");
  std::string frameAction, dumpPath;
  int nmax = 32;
  double aHalf = 0.0;
  frame->add_option("action", frameAction)->required()->check(CLI::IsMember({"check", "parseval", "reconstruct"}));
  frame->add_option("--covering", covPath)->required();
  frame->add_option("--grid", grid.grid, "N,L");
  frame->add_option("--nmax", nmax);
  frame->add_option("--a", aHalf, "Half side of the modulation cube (0 = automatic)");
  frame->add_option("--signal", signalArg);
  frame->add_option("--dump", dumpPath, "Write frame coefficients (parseval)");
  frame->add_option("--raw-out", rawOut, "Raw reconstruction (reconstruct)");
  frame->callback([&] {
    action = [&] {
      Covering c;
      loadCovering(covPath, c);
      int d = json::parse(slurp(covPath)).value("dim", 1);
      json g = grid.spec(d);
      json o{{"nmax", nmax}, {"a", aHalf}, {"grid", g}};
      std::string os = o.dump();
      Text t;
      if (frameAction == "check") {
        check(hc_frame_check(c.p, os.c_str(), &t.p));
        report = json::parse(t.str());
        return;
      }
      Signal s;
      loadSignal(signalArg, g, c.p, s);
      if (frameAction == "parseval") {
        check(hc_frame_parseval(s.p, c.p, os.c_str(), &t.p));
        report = json::parse(t.str());
        if (!dumpPath.empty()) {
          Text coef;
          check(hc_frame_analyze(s.p, c.p, os.c_str(), &coef.p));
          std::ofstream f(dumpPath);
          f << coef.str();
          if (!f) throw Failure{HC_ERR_IO, "cannot write " + dumpPath};
        }
      } else {
        Signal r;
        check(hc_frame_reconstruct(s.p, c.p, os.c_str(), &r.p, &t.p));
        if (!rawOut.empty()) check(hc_signal_write_raw(r.p, rawOut.c_str()));
        report = json::parse(t.str());
      }
    };
  });

  // wavelet
  auto* wavelet = app.add_subcommand("wavelet", "Shearlet-group wavelet transform");
  wavelet->require_subcommand(1);
  auto* wt = wavelet->add_subcommand("transform", "Sampled wavelet transform of a signal");
  std::string mode = "fourier";
  int samples = 8;
  double wc = 0.5;
  wt->add_option("--c", wc);
  wt->add_option("--delta", delta);
  wt->add_option("--jrange", jrange, "A:B");
  wt->add_option("--krange", krange, "K or -K:K");
  wt->add_option("--signal", signalArg);
  wt->add_option("--grid", grid.grid, "N,L");
  wt->add_option("--mode", mode)->check(CLI::IsMember({"fourier", "direct"}));
  wt->add_option("--samples", samples, "Spatial samples per axis in the report");
  wt->callback([&] {
    action = [&] {
      json g = grid.spec(2);
      g["d"] = 2;
      Signal s;
      loadSignal(signalArg, g, nullptr, s);
      json o{{"c", wc}, {"delta", delta}, {"mode", mode}, {"samples", samples}};
      if (!jrange.empty()) {
        auto [a, b] = parseRange(jrange, false);
        o["jmin"] = a;
        o["jmax"] = b;
      }
      if (!krange.empty()) {
        auto [a, b] = parseRange(krange, true);
        o["kmin"] = a;
        o["kmax"] = b;
      }
      Text t;
      check(hc_wavelet_transform(s.p, o.dump().c_str(), &t.p));
      report = json::parse(t.str());
    };
  });
  auto* wp = wavelet->add_subcommand("probe", "Coorbit versus decomposition norm ratios");
  double walpha = 0, wbeta = 0;
  std::string signalsPath;
  wp->add_option("--c", wc);
  wp->add_option("--p", pStr);
  wp->add_option("--q", qStr);
  wp->add_option("--alpha", walpha, "Weight exponent of ||h^-1||");
  wp->add_option("--beta", wbeta, "Weight exponent of |det h|");
  wp->add_option("--signals", signalsPath, "JSON array of signal specs");
  wp->callback([&] {
    action = [&] {
      json o{{"c", wc}, {"alpha", walpha}, {"beta", wbeta}};
      putExponent(o, "p", pStr);
      putExponent(o, "q", qStr);
      if (!signalsPath.empty()) o["signals"] = jsonArg(signalsPath);
      Text t;
      check(hc_wavelet_probe(o.dump().c_str(), &t.p));
      report = json::parse(t.str());
    };
  });

  std::function<void(CLI::App*)> passUp = [&](CLI::App* a) {
    for (auto* sub : a->get_subcommands({})) {
      sub->fallthrough();
      passUp(sub);
    }
  };
  passUp(&app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    action();
    std::string text = report.dump(2) + "\n";
    if (out.empty()) {
      std::cout << text;
    } else {
      std::ofstream os(out);
      os << text;
      if (!os) throw Failure{HC_ERR_IO, "cannot write " + out};
    }
  } catch (const Failure& f) {
    std::cerr << "harmcover: " << hc_status_name(f.status) << ": " << f.message << "\n";
    return exitCode(f.status);
  } catch (const json::exception& e) {
    std::cerr << "harmcover: internal: malformed library output: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
