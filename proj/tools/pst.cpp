// Command-line front end: chain synthesis, checks, evolution traces,
// bound sweeps, revival and encoding constructions, disorder ensembles.
// Exit codes: 0 success, 2 invalid input, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pst/bounds.hpp"
#include "pst/chain.hpp"
#include "pst/dynamics.hpp"
#include "pst/encoding.hpp"
#include "pst/io.hpp"
#include "pst/revival.hpp"
#include "pst/robustness.hpp"
#include "pst/synthesis.hpp"

namespace {

using nlohmann::json;

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw pst::invalid_input_error("cannot write file: " + out);
  f << text;
}

pst::ChainSpec load_chain(const std::string& path) { return pst::read_chain_file(path).chain; }

double resolve_t0(const pst::ChainSpec& chain, std::optional<double> given) {
  if (given) return *given;
  pst::PstVerdict v = pst::pst_check(chain);
  if (!v.t0)
    throw pst::invalid_input_error(
        "chain has no certified transfer time; pass --t0 explicitly");
  return *v.t0;
}

void write_synth_output(const std::string& out, pst::ChainSpec chain, bool rescale,
                        const std::string& generator,
                        std::map<std::string, double> parameters,
                        std::vector<std::string> warnings) {
  if (rescale) {
    parameters["max_coupling_before_rescale"] = chain.max_coupling();
    chain = pst::rescaled_to_unit_max(chain);
    parameters["rescaled"] = 1.0;
  }
  pst::ChainFile file;
  file.chain = std::move(chain);
  file.provenance.generator = generator;
  file.provenance.parameters = std::move(parameters);
  file.provenance.warnings = std::move(warnings);
  for (const auto& w : file.provenance.warnings) std::cerr << "warning: " << w << "\n";
  emit(out, pst::chain_to_json(file));
}

pst::ReceiverWindow make_window(const std::string& kind, double width) {
  if (kind == "delta") return pst::ReceiverWindow::delta();
  if (kind == "box") return pst::ReceiverWindow::box(width);
  if (kind == "gaussian") return pst::ReceiverWindow::gaussian(width);
  throw pst::invalid_input_error("unknown window kind: " + kind);
}

std::pair<int, int> parse_region(const std::string& spec, int n) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw pst::invalid_input_error("region must be central:K or FIRST:LAST");
  try {
    if (spec.rfind("central:", 0) == 0) {
      const int count = std::stoi(spec.substr(colon + 1));
      return pst::central_region(n, count);
    }
    const int first = std::stoi(spec.substr(0, colon));
    const int last = std::stoi(spec.substr(colon + 1));
    return {first, last};
  } catch (const std::invalid_argument&) {
    throw pst::invalid_input_error("cannot parse region: " + spec);
  } catch (const std::out_of_range&) {
    throw pst::invalid_input_error("cannot parse region: " + spec);
  }
}

std::string verdict_json(const pst::ChainSpec& chain) {
  pst::PstVerdict v = pst::pst_check(chain);
  json j;
  j["n"] = chain.n;
  j["mirror_symmetric"] = v.is_mirror_symmetric;
  j["odd_gap_spectrum"] = v.has_odd_gap_spectrum;
  if (v.t0) {
    j["t0"] = *v.t0;
    j["base_gap"] = std::numbers::pi / *v.t0;
  }
  if (v.phase) {
    j["phase_re"] = v.phase->real();
    j["phase_im"] = v.phase->imag();
  }
  return j.dump(2) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"design and analysis toolkit for timing-insensitive state-transfer chains"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string out = "-";
  app.add_option("-o,--out", out, "output path ('-' for stdout)")->capture_default_str();

  // ---- synth -----------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "generate chains");
  synth->require_subcommand(1);

  struct {
    int n = 0, r = 0;
    double j = 1.0, gamma = 0.0, base_gap = 1.0;
    int r2_gamma = 1;
    bool rescale = false;
    std::string spectrum_path;
  } sy;

  auto* kraw = synth->add_subcommand("krawtchouk", "fastest transfer chain");
  kraw->add_option("--n", sy.n, "chain length")->required();
  kraw->add_option("--j", sy.j, "coupling scale")->capture_default_str();
  kraw->add_flag("--rescale", sy.rescale, "rescale to unit max coupling");
  kraw->callback([&] {
    pst::ChainSpec chain = pst::krawtchouk(sy.n, sy.j);
    write_synth_output(out, std::move(chain), sy.rescale, "krawtchouk",
                       {{"n", double(sy.n)}, {"j", sy.j}}, {});
  });

  auto* trex = synth->add_subcommand("trex", "two-scale spectrum chain");
  trex->add_option("--n", sy.n, "chain length")->required();
  trex->add_option("--r", sy.r, "central eigenvalue count")->required();
  trex->add_option("--gamma", sy.gamma, "clear-out scale")->required();
  trex->add_option("--base-gap", sy.base_gap, "base gap g")->capture_default_str();
  trex->add_flag("--rescale", sy.rescale, "rescale to unit max coupling");
  trex->callback([&] {
    pst::TRexParams p = pst::make_trex_params(sy.n, sy.r, sy.gamma, sy.base_gap);
    pst::ChainSpec chain = pst::trex_chain(p, false);
    std::vector<std::string> warnings;
    if (p.snapped) warnings.push_back(p.snap_note);
    write_synth_output(out, std::move(chain), sy.rescale, "trex",
                       {{"n", double(p.n)},
                        {"r", double(p.r)},
                        {"gamma", p.gamma},
                        {"requested_gamma", p.requested_gamma},
                        {"base_gap", p.base_gap}},
                       std::move(warnings));
  });

  auto* approx = synth->add_subcommand("trex-approx", "three-element approximation");
  approx->add_option("--n", sy.n, "chain length")->required();
  approx->add_option("--r", sy.r, "central eigenvalue count")->required();
  approx->add_option("--gamma", sy.gamma, "clear-out scale")->required();
  approx->add_option("--base-gap", sy.base_gap, "base gap g")->capture_default_str();
  approx->add_flag("--rescale", sy.rescale, "rescale to unit max coupling");
  approx->callback([&] {
    pst::TRexParams p = pst::make_trex_params(sy.n, sy.r, sy.gamma, sy.base_gap);
    pst::ChainSpec chain = pst::trex_approximation(p);
    std::vector<std::string> warnings;
    if (p.snapped) warnings.push_back(p.snap_note);
    write_synth_output(out, std::move(chain), sy.rescale, "trex-approx",
                       {{"n", double(p.n)},
                        {"r", double(p.r)},
                        {"gamma", p.gamma},
                        {"requested_gamma", p.requested_gamma},
                        {"base_gap", p.base_gap}},
                       std::move(warnings));
  });

  auto* r2 = synth->add_subcommand("r2", "two retained central eigenvalues");
  r2->add_option("--n", sy.n, "chain length (even)")->required();
  r2->add_option("--gamma", sy.r2_gamma, "odd spacing factor")->required();
  r2->add_flag("--rescale", sy.rescale, "rescale to unit max coupling");
  r2->callback([&] {
    pst::Spectrum s = pst::special_r2_spectrum(sy.n, sy.r2_gamma);
    pst::ChainSpec chain = pst::chain_from_spectrum(s);
    std::ostringstream label;
    label << "r2 n=" << sy.n << " gamma=" << sy.r2_gamma;
    chain.label = label.str();
    write_synth_output(out, std::move(chain), sy.rescale, "r2",
                       {{"n", double(sy.n)}, {"gamma", double(sy.r2_gamma)}}, {});
  });

  auto* fromspec = synth->add_subcommand("from-spectrum", "inverse eigenvalue solve");
  fromspec->add_option("--spectrum", sy.spectrum_path, "spectrum JSON file")->required();
  fromspec->add_flag("--rescale", sy.rescale, "rescale to unit max coupling");
  fromspec->callback([&] {
    pst::Spectrum s = pst::read_spectrum_file(sy.spectrum_path);
    pst::ChainSpec chain = pst::chain_from_spectrum(s);
    chain.label = "from-spectrum";
    write_synth_output(out, std::move(chain), sy.rescale, "from-spectrum",
                       {{"n", double(s.values.size())}}, {});
  });

  // ---- check -----------------------------------------------------------
  auto* check = app.add_subcommand("check", "transfer verdict for a chain file");
  struct {
    std::string chain_path;
  } ck;
  check->add_option("--chain", ck.chain_path, "chain JSON file")->required();
  check->callback([&] { emit(out, verdict_json(load_chain(ck.chain_path))); });

  // ---- evolve ----------------------------------------------------------
  auto* evolve = app.add_subcommand("evolve", "end-to-end evolution trace CSV");
  struct {
    std::string chain_path;
    double t_max = 0;
    int steps = 1001;
    int threads = 0;
  } ev;
  evolve->add_option("--chain", ev.chain_path, "chain JSON file")->required();
  evolve->add_option("--tmax", ev.t_max, "time span")->required();
  evolve->add_option("--steps", ev.steps, "grid points")->capture_default_str();
  evolve->add_option("--threads", ev.threads, "0 = default, 1 = serial");
  evolve->callback([&] {
    pst::EvolutionTrace tr = pst::trace(load_chain(ev.chain_path), ev.t_max, ev.steps, ev.threads);
    std::ostringstream s;
    pst::write_trace_csv(s, tr);
    emit(out, s.str());
  });

  // ---- window ----------------------------------------------------------
  auto* window = app.add_subcommand("window", "windowed transfer and expected fidelity");
  struct {
    std::string chain_path, kind = "gaussian";
    double width = 0.05;
    std::optional<double> t0;
  } wd;
  window->add_option("--chain", wd.chain_path, "chain JSON file")->required();
  window->add_option("--kind", wd.kind, "delta|box|gaussian")->capture_default_str();
  window->add_option("--width", wd.width, "box full width or gaussian sigma")
      ->capture_default_str();
  window->add_option("--t0", wd.t0, "nominal arrival time (default: certified t0)");
  window->callback([&] {
    pst::ChainSpec chain = load_chain(wd.chain_path);
    const double t0 = resolve_t0(chain, wd.t0);
    pst::ReceiverWindow win = make_window(wd.kind, wd.width);
    json j;
    j["t0"] = t0;
    j["kind"] = wd.kind;
    if (wd.kind != "delta") j["width"] = wd.width;
    j["windowed_transfer"] = pst::windowed_transfer(chain, win, t0);
    j["expected_fidelity"] = pst::expected_fidelity(chain, win, t0);
    emit(out, j.dump(2) + "\n");
  });

  // ---- bounds ----------------------------------------------------------
  auto* bounds = app.add_subcommand("bounds", "speed-limit bounds");
  bounds->require_subcommand(1);
  struct {
    int n = 0, r = 0;
    std::vector<double> gammas;
    int threads = 0;
    std::string chain_path;
    int steps = 4001;
  } bd;

  auto* sweep = bounds->add_subcommand("sweep", "trade-off sweep over gamma");
  sweep->add_option("--n", bd.n, "chain length")->required();
  sweep->add_option("--r", bd.r, "central eigenvalue count")->required();
  sweep->add_option("--gammas", bd.gammas, "comma-separated gamma list")
      ->required()
      ->delimiter(',');
  sweep->add_option("--threads", bd.threads, "0 = default, 1 = serial");
  sweep->callback([&] {
    auto points = pst::tradeoff_sweep(bd.n, bd.r, bd.gammas, bd.threads);
    for (const auto& p : points)
      if (!p.note.empty()) std::cerr << "gamma " << p.gamma << ": " << p.note << "\n";
    std::ostringstream s;
    pst::write_tradeoff_csv(s, points);
    emit(out, s.str());
  });

  auto* bcheck = bounds->add_subcommand("check", "bound diagnostics for a chain");
  bcheck->add_option("--chain", bd.chain_path, "chain JSON file")->required();
  bcheck->add_option("--steps", bd.steps, "trace resolution for the envelope check")
      ->capture_default_str();
  bcheck->callback([&] {
    pst::ChainSpec chain = load_chain(bd.chain_path);
    const double j1 = chain.couplings[0];
    const double mt = pst::mandelstam_tamm_time(chain);
    json j;
    j["j1"] = j1;
    j["mandelstam_tamm_time"] = mt;
    pst::PstVerdict v = pst::pst_check(chain);
    if (v.t0) {
      j["t0"] = *v.t0;
      j["j1_t0"] = j1 * *v.t0;
      const pst::Parity parity = chain.n % 2 == 0 ? pst::Parity::even : pst::Parity::odd;
      j["minimal_j1"] = pst::theorem_bound(parity, *v.t0);
    }
    pst::EvolutionTrace tr = pst::trace(chain, mt, bd.steps, 1);
    j["anandan_violation"] = pst::anandan_violation(chain, tr);
    emit(out, j.dump(2) + "\n");
  });

  // ---- prune -----------------------------------------------------------
  auto* prune = app.add_subcommand("prune", "remove the extremal eigenvalue pair");
  struct {
    std::string chain_path;
  } pr;
  prune->add_option("--chain", pr.chain_path, "chain JSON file")->required();
  prune->callback([&] {
    pst::ChainSpec chain = load_chain(pr.chain_path);
    pst::PruneResult res = pst::prune_extremal_pair(chain);
    write_synth_output(out, std::move(res.chain), false, "prune",
                       {{"parent_n", double(chain.n)},
                        {"predicted_j1_sq", res.predicted_j1_sq}},
                       {});
  });

  // ---- revival ---------------------------------------------------------
  auto* revival = app.add_subcommand("revival", "fractional-revival constructions");
  revival->require_subcommand(1);
  struct {
    std::string chain_path, spectrum_path;
    double theta = 0, phase = 0;
  } rv;

  auto* central = revival->add_subcommand("central", "central-coupling conversion");
  central->add_option("--chain", rv.chain_path, "odd-length chain JSON file")->required();
  central->add_option("--theta", rv.theta, "conversion angle in [0, pi/2]")->required();
  central->callback([&] {
    pst::ChainSpec chain = pst::central_coupling_revival(load_chain(rv.chain_path), rv.theta);
    write_synth_output(out, std::move(chain), false, "revival-central",
                       {{"theta", rv.theta}}, {});
  });

  auto* shift = revival->add_subcommand("shift", "antisymmetric-subspace spectral shift");
  shift->add_option("--spectrum", rv.spectrum_path, "spectrum JSON file")->required();
  shift->add_option("--phase", rv.phase, "relative arrival phase phi")->required();
  shift->callback([&] {
    pst::Spectrum s = pst::read_spectrum_file(rv.spectrum_path);
    pst::ChainSpec chain = pst::spectral_shift_revival(s, rv.phase);
    write_synth_output(out, std::move(chain), false, "revival-shift",
                       {{"phase", rv.phase}}, {});
  });

  // ---- encode ----------------------------------------------------------
  auto* encode = app.add_subcommand("encode", "optimal or eigenvector-orthogonal encoding");
  struct {
    std::string chain_path, trace_out;
    int m = 1;
    bool orthogonal = false;
    double t_max = 0;
    int steps = 1001;
    int threads = 0;
  } en;
  encode->add_option("--chain", en.chain_path, "chain JSON file")->required();
  encode->add_option("--m", en.m, "odd region size")->required();
  encode->add_flag("--orthogonal", en.orthogonal, "eigenvector-orthogonal variant");
  encode->add_option("--trace-out", en.trace_out, "also write an encoded trace CSV here");
  encode->add_option("--tmax", en.t_max, "trace span (default 2 t0)");
  encode->add_option("--steps", en.steps, "trace grid points")->capture_default_str();
  encode->add_option("--threads", en.threads, "0 = default, 1 = serial");
  encode->callback([&] {
    pst::ChainSpec chain = load_chain(en.chain_path);
    pst::EncodingPair pair = en.orthogonal
                                 ? pst::eigenvector_orthogonal_encoding(chain, en.m)
                                 : pst::optimal_timing_encoding(chain, en.m);
    json j;
    j["m"] = pair.region_size;
    j["orthogonal"] = en.orthogonal;
    j["objective"] = pair.objective;
    j["encoder"] = pair.encoder;
    j["decoder"] = pair.decoder;
    emit(out, j.dump(2) + "\n");
    if (!en.trace_out.empty()) {
      double t_max = en.t_max;
      if (!(t_max > 0)) t_max = 2.0 * resolve_t0(chain, std::nullopt);
      pst::EvolutionTrace tr = pst::encoded_trace(chain, pair, t_max, en.steps, en.threads);
      std::ostringstream s;
      pst::write_trace_csv(s, tr);
      emit(en.trace_out, s.str());
    }
  });

  // ---- perturb ---------------------------------------------------------
  auto* perturb = app.add_subcommand("perturb", "coupling-disorder ensembles");
  struct {
    std::string chain_path, chain_b_path, region = "central:45";
    std::vector<double> deltas;
    std::optional<double> t0, t0_b;
    int samples = 1000;
    std::uint64_t seed = 1;
    int threads = 0;
  } pb;
  perturb->add_option("--chain", pb.chain_path, "chain JSON file")->required();
  perturb->add_option("--chain-b", pb.chain_b_path, "second chain for a paired sweep");
  perturb->add_option("--deltas", pb.deltas, "comma-separated half-ranges")
      ->required()
      ->delimiter(',');
  perturb->add_option("--region", pb.region, "central:K or FIRST:LAST coupling range")
      ->capture_default_str();
  perturb->add_option("--t0", pb.t0, "evaluation time for the first chain");
  perturb->add_option("--t0-b", pb.t0_b, "evaluation time for the second chain");
  perturb->add_option("--samples", pb.samples, "ensemble size")->capture_default_str();
  perturb->add_option("--seed", pb.seed, "base seed")->capture_default_str();
  perturb->add_option("--threads", pb.threads, "0 = default, 1 = serial");
  perturb->callback([&] {
    pst::ChainSpec chain_a = load_chain(pb.chain_path);
    const double t0a = resolve_t0(chain_a, pb.t0);
    const auto region_a = parse_region(pb.region, chain_a.n);
    std::vector<pst::PerturbRow> rows;
    auto label_of = [](const pst::ChainSpec& c, const char* fallback) {
      return c.label.empty() ? std::string(fallback) : c.label;
    };
    if (pb.chain_b_path.empty()) {
      for (double d : pb.deltas) {
        auto rep = pst::perturb_ensemble(chain_a, t0a, d, region_a.first, region_a.second,
                                         pb.samples, pb.seed, pb.threads);
        rows.push_back({d, label_of(chain_a, "chain-a"), rep});
      }
    } else {
      pst::ChainSpec chain_b = load_chain(pb.chain_b_path);
      const double t0b = resolve_t0(chain_b, pb.t0_b);
      const auto region_b = parse_region(pb.region, chain_b.n);
      auto reports = pst::delta_sweep(chain_a, chain_b, t0a, t0b, pb.deltas, region_a,
                                      region_b, pb.samples, pb.seed, pb.threads);
      for (std::size_t i = 0; i < pb.deltas.size(); ++i) {
        rows.push_back({pb.deltas[i], label_of(chain_a, "chain-a"), reports[i].first});
        rows.push_back({pb.deltas[i], label_of(chain_b, "chain-b"), reports[i].second});
      }
    }
    std::ostringstream s;
    pst::write_perturb_csv(s, rows);
    emit(out, s.str());
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  } catch (const pst::invalid_input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const pst::numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
