#include "pst/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace pst {

namespace {

using nlohmann::json;

[[noreturn]] void parse_failure(const std::string& text, std::size_t byte,
                                const std::string& what) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  std::ostringstream msg;
  msg << "parse error at line " << line << ", column " << col << ": " << what;
  throw invalid_input_error(msg.str());
}

json parse_checked(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    parse_failure(text, e.byte > 0 ? e.byte - 1 : 0, e.what());
  }
}

std::vector<double> number_list(const json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_array())
    throw invalid_input_error(std::string("missing or non-array field: ") + field);
  std::vector<double> out;
  for (const auto& v : j[field]) {
    if (!v.is_number()) throw invalid_input_error(std::string("non-numeric entry in ") + field);
    out.push_back(v.get<double>());
  }
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invalid_input_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw invalid_input_error("cannot write file: " + path);
  out << text;
  if (!out) throw invalid_input_error("write failed: " + path);
}

}  // namespace

std::string chain_to_json(const ChainFile& file) {
  json j;
  j["format_version"] = file.format_version;
  j["kind"] = "chain";
  j["n"] = file.chain.n;
  j["couplings"] = file.chain.couplings;
  j["diagonal"] = file.chain.diagonal;
  j["label"] = file.chain.label;
  json prov;
  prov["generator"] = file.provenance.generator;
  prov["parameters"] = file.provenance.parameters;
  prov["warnings"] = file.provenance.warnings;
  j["provenance"] = prov;
  return j.dump(2) + "\n";
}

ChainFile chain_from_json(const std::string& text) {
  json j = parse_checked(text);
  if (j.contains("kind") && j["kind"] != "chain")
    throw invalid_input_error("file is not a chain file");
  ChainFile out;
  if (j.contains("format_version")) out.format_version = j["format_version"].get<int>();
  std::vector<double> couplings = number_list(j, "couplings");
  std::vector<double> diagonal;
  if (j.contains("diagonal")) diagonal = number_list(j, "diagonal");
  std::string label;
  if (j.contains("label")) label = j["label"].get<std::string>();
  if (j.contains("n")) {
    const int n = j["n"].get<int>();
    if (n != static_cast<int>(couplings.size()) + 1)
      throw invalid_input_error("coupling count does not match n");
  }
  out.chain = ChainSpec(std::move(couplings), std::move(diagonal), std::move(label));
  if (j.contains("provenance")) {
    const json& prov = j["provenance"];
    if (prov.contains("generator")) out.provenance.generator = prov["generator"].get<std::string>();
    if (prov.contains("parameters"))
      for (auto it = prov["parameters"].begin(); it != prov["parameters"].end(); ++it)
        out.provenance.parameters[it.key()] = it.value().get<double>();
    if (prov.contains("warnings"))
      for (const auto& w : prov["warnings"]) out.provenance.warnings.push_back(w.get<std::string>());
  }
  return out;
}

void write_chain_file(const std::string& path, const ChainFile& file) {
  write_text(path, chain_to_json(file));
}

ChainFile read_chain_file(const std::string& path) { return chain_from_json(read_text(path)); }

std::string spectrum_to_json(const Spectrum& spectrum) {
  json j;
  j["format_version"] = 1;
  j["kind"] = "spectrum";
  j["values"] = spectrum.values;
  if (spectrum.base_gap) j["base_gap"] = *spectrum.base_gap;
  if (spectrum.transfer_time) j["transfer_time"] = *spectrum.transfer_time;
  return j.dump(2) + "\n";
}

Spectrum spectrum_from_json(const std::string& text) {
  json j = parse_checked(text);
  if (j.contains("kind") && j["kind"] != "spectrum")
    throw invalid_input_error("file is not a spectrum file");
  Spectrum s(number_list(j, "values"));
  if (j.contains("base_gap")) {
    const double g = j["base_gap"].get<double>();
    auto detected = detect_base_gap(s.values);
    if (!detected || std::abs(*detected - g) > 1e-9 * g)
      throw invalid_input_error("declared base_gap fails the odd-gap check");
    s.base_gap = g;
    s.transfer_time = std::numbers::pi / g;
    if (j.contains("transfer_time")) {
      const double t = j["transfer_time"].get<double>();
      if (std::abs(t - *s.transfer_time) > 1e-9 * *s.transfer_time)
        throw invalid_input_error("transfer_time inconsistent with base_gap");
    }
  } else if (auto g = detect_base_gap(s.values)) {
    s.base_gap = *g;
    s.transfer_time = std::numbers::pi / *g;
  }
  return s;
}

void write_spectrum_file(const std::string& path, const Spectrum& spectrum) {
  write_text(path, spectrum_to_json(spectrum));
}

Spectrum read_spectrum_file(const std::string& path) {
  return spectrum_from_json(read_text(path));
}

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_trace_csv(std::ostream& out, const EvolutionTrace& trace) {
  out << "t,re_amp,im_amp,fe,f\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i)
    out << format_g17(trace.times[i]) << ',' << format_g17(trace.amplitudes[i].real()) << ','
        << format_g17(trace.amplitudes[i].imag()) << ',' << format_g17(trace.fe[i]) << ','
        << format_g17(trace.f[i]) << '\n';
}

void write_tradeoff_csv(std::ostream& out, const std::vector<TradeoffPoint>& points) {
  out << "gamma,t0,j1,j1_t0\n";
  for (const auto& p : points) {
    if (!p.ok) continue;
    out << format_g17(p.gamma) << ',' << format_g17(p.t0) << ',' << format_g17(p.j1) << ','
        << format_g17(p.j1_t0) << '\n';
  }
}

namespace {

// Quote a CSV field when needed (commas appear in some generated labels).
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace

void write_perturb_csv(std::ostream& out, const std::vector<PerturbRow>& rows) {
  out << "delta,chain_label,q25,q50,q75,mean,samples,resampled\n";
  for (const auto& r : rows)
    out << format_g17(r.delta) << ',' << csv_field(r.chain_label) << ','
        << format_g17(r.report.q25) << ','
        << format_g17(r.report.q50) << ',' << format_g17(r.report.q75) << ','
        << format_g17(r.report.mean) << ',' << r.report.samples << ',' << r.report.resampled
        << '\n';
}

}  // namespace pst
