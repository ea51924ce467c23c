#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>

#include "CLI11.hpp"
#include "telescopes/action.hpp"
#include "telescopes/normalform.hpp"
#include "telescopes/specfile.hpp"
#include "telescopes/verify.hpp"

using namespace telescopes;

namespace {

struct Range {
  std::size_t from = 0, to = 0;
};

// "4" -> 1..4 (or from_default..4), "2..3" -> 2..3
Range parse_range(const std::string& s, std::size_t from_default) {
  auto dots = s.find("..");
  try {
    if (dots == std::string::npos) return {from_default, std::stoul(s)};
    return {std::stoul(s.substr(0, dots)), std::stoul(s.substr(dots + 2))};
  } catch (const std::exception&) {
    throw ParseError("bad level range '" + s + "'", 0);
  }
}

struct Config {
  std::string spec;
  std::string levels;
  std::uint64_t seed = 1;
  std::string format = "text";
  std::uint32_t degree_cap = 30000;
  double time_budget = 0;
  std::size_t search_budget = 4000;
};

class Runner {
 public:
  Runner(const Config& c, std::string command) : cfg_(c), start_(std::chrono::steady_clock::now()) {
    doc_.command = std::move(command);
    doc_.seed = c.seed;
    opt_.seed = c.seed;
    opt_.degree_cap = c.degree_cap;
    opt_.search_budget = c.search_budget;
  }

  ModelPtr model() {
    if (!model_) {
      if (cfg_.spec.empty()) throw ParseError("--spec is required", 0);
      if (!std::filesystem::exists(cfg_.spec)) throw ParseError("cannot open spec file " + cfg_.spec, 0);
      model_ = build_model(load_spec_file(cfg_.spec));
      doc_.spec_id = model_->id();
    }
    return model_;
  }
  const VerifyOptions& opt() const { return opt_; }

  // Runs one check; CapExceeded becomes skipped(cap), and so does every
  // check after the time budget is spent.
  void run(const std::string& id, std::size_t from, std::size_t to,
           const std::function<VerificationReport()>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    double used = std::chrono::duration<double>(t0 - start_).count();
    VerificationReport r;
    if (cfg_.time_budget > 0 && used > cfg_.time_budget) {
      r = skipped(id, from, to, "time budget exhausted");
    } else {
      try {
        r = fn();
      } catch (const CapExceeded& e) {
        r = skipped(id, from, to, e.what());
      }
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    doc_.reports.push_back(std::move(r));
  }

  int finish() {
    if (cfg_.format == "json")
      std::cout << to_json(doc_);
    else
      std::cout << to_text(doc_);
    return verdict_ok(doc_.overall()) ? 0 : 1;
  }

 private:
  VerificationReport skipped(const std::string& id, std::size_t from, std::size_t to, const std::string& why) {
    VerificationReport r;
    r.check_id = id;
    r.spec_id = model_ ? model_->id() : "";
    r.level_from = from;
    r.level_to = to;
    r.method = "none";
    r.verdict = Verdict::skipped_cap;
    r.notes.push_back(why);
    return r;
  }

  Config cfg_;
  std::chrono::steady_clock::time_point start_;
  ReportDocument doc_;
  VerifyOptions opt_;
  ModelPtr model_;
};

std::size_t parse_level(const std::string& s) {
  try {
    std::size_t pos = 0;
    std::size_t v = std::stoul(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad level '" + s + "'", 0);
  }
}

int cmd_verify(Runner& run, const Config& cfg, const std::string& checks, const std::string& gen_levels,
               const std::string& frame_levels) {
  ModelPtr m = run.model();
  Range lv = parse_range(cfg.levels.empty() ? "4" : cfg.levels, 1);
  if (lv.to > m->max_level()) throw PreconditionError("--levels above the spec's max_level");
  auto want = [&](const char* name) { return checks.find(name) != std::string::npos; };
  const VerifyOptions& o = run.opt();
  if (want("axioms"))
    run.run("commutator", 2, lv.to, [&] { return check_commutator_axiom(m, lv.to, o); });
  if (want("flexibility"))
    run.run("flexibility", 1, lv.to, [&] { return check_flexibility(m, lv.to, o); });
  if (want("generation")) {
    Range g = parse_range(gen_levels, 2);
    for (std::size_t l = g.from; l <= g.to; ++l)
      run.run("generation", l, l, [&] { return check_generation_axiom(m, l, o); });
  }
  if (want("frame")) {
    Range f = parse_range(frame_levels, 1);
    run.run("frame", f.from, f.to,
            [&] { return check_frame_surjectivity(m, f.from, f.to, default_generators(m), o); });
  }
  return run.finish();
}

int cmd_eval(Runner& run, const std::string& expr, const std::string& level) {
  ModelPtr m = run.model();
  std::size_t l = parse_level(level);
  LazyElement g = parse_element(m, expr);
  if (l == 0 || l > m->max_level()) throw PreconditionError("level out of range");
  run.run("eval", l, l, [&] {
    VerificationReport r;
    r.check_id = "eval";
    r.spec_id = m->id();
    r.level_from = r.level_to = l;
    r.method = "exact-evaluation";
    r.quantity("element", format_element(g));
    r.quantity("value", m->format_level(g.project(l), l));
    r.quantity("identity", m->is_identity(g.project(l), l) ? "true" : "false");
    return r;
  });
  return run.finish();
}

int cmd_gen2(Runner& run, const std::string& check_levels) {
  ModelPtr m = run.model();
  Range lv = parse_range(check_levels, 2);
  const VerifyOptions& o = run.opt();
  if (auto alt = std::dynamic_pointer_cast<const SpinalPermModel>(m)) {
    TwoGenAlt tg = build_two_generators_alt(alt, o);
    run.run("two-generator-construction", 1, tg.n, [&] { return tg.certificate; });
    run.run("two-generation", lv.from, lv.to, [&] { return verify_two_generation(tg.a, tg.b, lv.from, lv.to, o); });
  } else if (auto el = std::dynamic_pointer_cast<const LinearModel>(m)) {
    TwoGenSl tg = build_two_generators_sl(el, o);
    run.run("two-generator-construction", 1, tg.n, [&] { return tg.certificate; });
  } else {
    throw PreconditionError("gen2 needs an alt or el spec");
  }
  return run.finish();
}

int cmd_nf(Runner& run, const std::string& word) {
  ModelPtr m = run.model();
  LazyElement g = parse_element(m, word);
  run.run("normal-form", 1, m->max_level(), [&] {
    VerificationReport r;
    r.check_id = "normal-form";
    r.spec_id = m->id();
    r.method = "exact-evaluation";
    bool matrix = m->engine() != Engine::permutation;
    NormalForm nf = matrix ? weak_normal_form_sl(g) : weak_normal_form(g);
    LazyElement back = reassemble(m, nf);
    std::size_t top = std::min(m->max_level(), nf.m + 4);
    r.level_from = nf.m + 1;
    r.level_to = top;
    r.quantity("m", std::to_string(nf.m));
    r.quantity("length", std::to_string(g.length()));
    r.quantity("normal form", format_element(back));
    bool eq = true;
    for (std::size_t j = nf.m + 1; j <= top && eq; ++j) eq = m->equal(back.project(j), g.project(j));
    r.add("reassembly equals input", "exact-evaluation", eq, "levels " + std::to_string(nf.m + 1) + ".." + std::to_string(top));
    r.add("m <= word length", "exact-evaluation", nf.m <= g.length());
    if (!matrix) {
      Membership mem = in_direct_sum(g);
      r.quantity("in direct sum", mem.member ? "true" : "false");
      if (mem.witness) {
        r.quantity("consistent point", m->alphabet().format(mem.witness->w));
        r.quantity("consistent point branch", mem.witness->branch);
      }
    } else {
      r.quantity("scalar class", scalar_class(nf) ? "true" : "false");
    }
    r.finalize();
    return r;
  });
  return run.finish();
}

int cmd_head(Runner& run, const std::string& mode, const std::string& a, const std::string& b) {
  ModelPtr m = run.model();
  LazyElement g = parse_element(m, a);
  if (mode == "eq") {
    LazyElement h = parse_element(m, b.empty() ? "1" : b);
    run.run("head-equal", 1, m->max_level(), [&] {
      VerificationReport r;
      r.check_id = "head-equal";
      r.spec_id = m->id();
      r.method = "normal-form";
      r.level_from = 1;
      r.level_to = m->max_level();
      r.quantity("equal", head_equal(g, h) ? "true" : "false");
      return r;
    });
  } else if (mode == "nf") {
    run.run("head-normal-form", 1, m->max_level(), [&] {
      VerificationReport r;
      r.check_id = "head-normal-form";
      r.spec_id = m->id();
      r.method = "normal-form";
      HeadNormalForm h = head_normal_form(g);
      LazyElement back = reassemble_head(m, h);
      r.level_from = h.n + 1;
      r.level_to = m->max_level();
      r.quantity("n", std::to_string(h.n));
      r.quantity("factors", std::to_string(h.factors.size()));
      r.quantity("merges", std::to_string(h.merges));
      r.quantity("head normal form", format_element(back));
      bool eq = true;
      for (std::size_t j = h.n + 1; j <= m->max_level() && eq; ++j) eq = m->equal(back.project(j), g.project(j));
      r.add("reassembly equals input above level n", "exact-evaluation", eq);
      r.finalize();
      return r;
    });
  } else {
    throw ParseError("head mode must be eq or nf", 0);
  }
  return run.finish();
}

int cmd_act(Runner& run, const std::string& word, const std::string& point, std::size_t out_len) {
  ModelPtr m = run.model();
  LazyElement g = parse_element(m, word);
  bool cantor = point.find('@') == std::string::npos;
  run.run("act", 1, m->max_level(), [&] {
    VerificationReport r;
    r.check_id = cantor ? "act-cantor" : "act-limit";
    r.spec_id = m->id();
    r.method = "exact-evaluation";
    if (cantor) {
      CantorPoint p = parse_cantor(*m, point);
      CantorImage img = act_cantor_prefix(g, p, out_len);
      r.level_from = 1;
      r.level_to = out_len;
      r.quantity("image", m->alphabet().format(img.prefix));
      r.quantity("stable length", std::to_string(img.stable_len));
      r.quantity("status", img.status);
      if (!img.complete) r.verdict = Verdict::skipped_cap;
    } else {
      LimitPoint p = parse_limit(*m, point);
      LimitAction a = act_limit(g, p);
      r.level_from = a.t;
      r.level_to = a.checked_to;
      r.quantity("image", format_limit(*m, a.point));
      r.quantity("stabilization level", std::to_string(a.t));
    }
    return r;
  });
  return run.finish();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Telescope groups: build, verify and evaluate"};
  app.require_subcommand(1);
  Config cfg;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--spec", cfg.spec, "telescope spec file");
    sub->add_option("--levels", cfg.levels, "level or range a..b");
    sub->add_option("--seed", cfg.seed, "seed for every randomized routine");
    sub->add_option("--format", cfg.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--degree-cap", cfg.degree_cap, "largest permutation degree for group orders");
    sub->add_option("--time-budget", cfg.time_budget, "seconds; later checks are skipped(cap)");
    sub->add_option("--search-budget", cfg.search_budget, "random search attempts");
  };

  std::string checks = "axioms,flexibility,generation,frame", gen_levels = "2..2", frame_levels = "1..2";
  auto* verify = app.add_subcommand("verify", "axioms, flexibility, generation and frame checks");
  common(verify);
  verify->add_option("--checks", checks, "comma separated subset of axioms,flexibility,generation,frame");
  verify->add_option("--generation-levels", gen_levels, "levels for the generation axiom");
  verify->add_option("--frame-levels", frame_levels, "levels for the frame check");

  std::string expr, level, word, point, mode, other, check_levels = "2..3";
  std::size_t out_len = 8;
  auto* eval = app.add_subcommand("eval", "print pi_level of an element");
  common(eval);
  eval->add_option("expr", expr)->required();
  eval->add_option("level", level)->required();

  auto* gen2 = app.add_subcommand("gen2", "two-generator construction");
  common(gen2);
  gen2->add_option("--check-levels", check_levels, "levels for the order check");

  auto* nf = app.add_subcommand("nf", "weak normal form");
  common(nf);
  nf->add_option("word", word)->required();

  auto* head = app.add_subcommand("head", "head word problem");
  common(head);
  head->add_option("mode", mode, "eq or nf")->required();
  head->add_option("g", word)->required();
  head->add_option("other", other, "second element for eq");

  auto* act = app.add_subcommand("act", "action on the direct limit (w@i) or the Cantor set (p(o*), p...)");
  common(act);
  act->add_option("word", word)->required();
  act->add_option("point", point)->required();
  act->add_option("--out-len", out_len, "Cantor prefix length");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    std::string command = app.get_subcommands().front()->get_name();
    Runner run(cfg, command);
    if (verify->parsed()) return cmd_verify(run, cfg, checks, gen_levels, frame_levels);
    if (eval->parsed()) return cmd_eval(run, expr, level);
    if (gen2->parsed()) return cmd_gen2(run, check_levels);
    if (nf->parsed()) return cmd_nf(run, word);
    if (head->parsed()) return cmd_head(run, mode, word, other);
    if (act->parsed()) return cmd_act(run, word, point, out_len);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
