#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "pst/bounds.hpp"
#include "pst/chain.hpp"
#include "pst/dynamics.hpp"
#include "pst/robustness.hpp"

namespace pst {

// Generator metadata carried alongside a chain so a file records how it
// was made (including any parameter snapping).
struct Provenance {
  std::string generator;                         // e.g. "trex", "krawtchouk"
  std::map<std::string, double> parameters;      // numeric parameters
  std::vector<std::string> warnings;             // e.g. snap notices
};

struct ChainFile {
  int format_version = 1;
  ChainSpec chain;
  Provenance provenance;
};

// JSON serialization. Doubles are emitted in shortest-round-trip form by
// the JSON layer, so write/parse round-trips are bit-exact.
std::string chain_to_json(const ChainFile& file);
ChainFile chain_from_json(const std::string& text);
void write_chain_file(const std::string& path, const ChainFile& file);
ChainFile read_chain_file(const std::string& path);

std::string spectrum_to_json(const Spectrum& spectrum);
Spectrum spectrum_from_json(const std::string& text);
void write_spectrum_file(const std::string& path, const Spectrum& spectrum);
Spectrum read_spectrum_file(const std::string& path);

// CSV emission; numbers carry 17 significant digits.
// header: t,re_amp,im_amp,fe,f
void write_trace_csv(std::ostream& out, const EvolutionTrace& trace);
// header: gamma,t0,j1,j1_t0 (flagged-failed points are skipped)
void write_tradeoff_csv(std::ostream& out, const std::vector<TradeoffPoint>& points);

struct PerturbRow {
  double delta = 0;
  std::string chain_label;
  PerturbationReport report;
};
// header: delta,chain_label,q25,q50,q75,mean,samples,resampled
void write_perturb_csv(std::ostream& out, const std::vector<PerturbRow>& rows);

std::string format_g17(double x);

}  // namespace pst
