// Copyright 2026 the pfbank authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Command-line front end: preset inspection, bank design with COE/CSV export,
// DDS-driven bank simulation, frequency-response export, and bank comparison.
//
// Exit codes: 0 success, 1 usage error, 2 design error.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pfbank/pfbank.hpp"

namespace {

namespace fs = std::filesystem;
using namespace pfbank;

// shortest round-trip form, plain digits for integral values
std::string fmt(double v) { return pfbank::detail::format_number(v); }

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

ScaleKind parse_scale(const std::string& name) {
  if (name == "mel") return ScaleKind::Mel;
  if (name == "bark") return ScaleKind::Bark;
  throw std::invalid_argument("unknown scale '" + name +
                              "' (expected mel or bark)");
}

WindowKind parse_window(const std::string& name) {
  if (name == "bartlett") return WindowKind::Bartlett;
  if (name == "hamming") return WindowKind::Hamming;
  throw std::invalid_argument("unknown window '" + name +
                              "' (expected bartlett or hamming)");
}

// "1200us", "1.5ms", "0.0012s" or plain seconds
double parse_duration_seconds(const std::string& text) {
  double factor = 1.0;
  std::string digits = text;
  if (digits.size() > 2 && digits.compare(digits.size() - 2, 2, "us") == 0) {
    factor = 1e-6;
    digits.resize(digits.size() - 2);
  } else if (digits.size() > 2 &&
             digits.compare(digits.size() - 2, 2, "ms") == 0) {
    factor = 1e-3;
    digits.resize(digits.size() - 2);
  } else if (digits.size() > 1 && digits.back() == 's') {
    digits.pop_back();
  }
  try {
    size_t used = 0;
    const double value = std::stod(digits, &used);
    if (used != digits.size()) throw std::invalid_argument(text);
    return value * factor;
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse duration '" + text + "'");
  }
}

// Band source shared by design/simulate/response: a built-in preset or a
// band document plus an explicit window.
struct BankChoice {
  BandList bands;
  WindowKind window = WindowKind::Bartlett;
  std::string label;
};

BankChoice resolve_bank(const std::string& scale_name, int variant,
                        const std::string& bands_file,
                        const std::string& window_name_arg) {
  BankChoice choice;
  if (!bands_file.empty()) {
    if (window_name_arg.empty()) {
      throw std::invalid_argument("--bands requires --window");
    }
    choice.bands = import_bands(read_file(bands_file));
    choice.window = parse_window(window_name_arg);
    choice.label = "custom:" + bands_file;
    return choice;
  }
  const BankPreset preset = load_preset(parse_scale(scale_name), variant);
  choice.bands = preset.bands;
  choice.window = preset.window;
  choice.label = scale_name + "-" + std::to_string(variant);
  return choice;
}

std::string two_digits(int k) {
  return (k < 10 ? "0" : "") + std::to_string(k);
}

void print_preset_table(std::ostream& os, const BankPreset& preset) {
  os << scale_name(preset.scale) << " preset " << preset.variant << " ("
     << window_name(preset.window) << " window)\n";
  os << "band,lower_hz,upper_hz,nominal_bw_hz,computed_bw_hz\n";
  for (int i = 0; i < kBandsPerBank; ++i) {
    const BandSpec& b = preset.bands[i];
    os << i + 1 << ',' << fmt(b.lower_hz) << ',' << fmt(b.upper_hz) << ','
       << fmt(b.nominal_bandwidth_hz) << ',' << fmt(b.computed_bandwidth_hz())
       << '\n';
  }
  const auto findings = validate_preset(preset);
  if (findings.empty()) {
    os << "findings: none\n";
  } else {
    os << "findings:\n";
    for (const auto& f : findings) os << "  " << f.describe() << '\n';
  }
}

// --- subcommands -------------------------------------------------------------

struct PresetsArgs {
  std::string scale;
  int variant = 0;
  std::string export_path;
};

int run_presets(const PresetsArgs& args) {
  std::vector<std::pair<ScaleKind, int>> selection;
  for (ScaleKind scale : {ScaleKind::Mel, ScaleKind::Bark}) {
    if (!args.scale.empty() && parse_scale(args.scale) != scale) continue;
    for (int variant = 1; variant <= 3; ++variant) {
      if (args.variant != 0 && args.variant != variant) continue;
      selection.emplace_back(scale, variant);
    }
  }
  if (selection.empty()) {
    throw std::invalid_argument("no preset matches the given scale/variant");
  }
  for (size_t i = 0; i < selection.size(); ++i) {
    if (i > 0) std::cout << '\n';
    print_preset_table(std::cout,
                       load_preset(selection[i].first, selection[i].second));
  }
  if (!args.export_path.empty()) {
    if (selection.size() != 1) {
      throw std::invalid_argument(
          "--export needs exactly one preset; pass --scale and --variant");
    }
    const BankPreset preset =
        load_preset(selection[0].first, selection[0].second);
    write_file(args.export_path, export_bands(preset.bands));
    std::cout << "exported band table to " << args.export_path << '\n';
  }
  return 0;
}

struct DesignArgs {
  std::string scale = "mel";
  int variant = 1;
  std::string bands_file;
  std::string window;
  int taps = 63;
  double sample_rate_hz = 50.0e6;
  int total_bits = 16;
  int fraction_bits = 15;
  int radix = 16;
  bool normalize = false;
  std::string out_dir = ".";
};

int run_design(const DesignArgs& args) {
  const BankChoice choice =
      resolve_bank(args.scale, args.variant, args.bands_file, args.window);
  const FixedPointFormat format{args.total_bits, args.fraction_bits};
  validate_format(format);
  if (args.radix != 2 && args.radix != 10 && args.radix != 16) {
    throw std::invalid_argument("radix must be 2, 10 or 16");
  }

  std::vector<FeasibilityWarning> warnings;
  std::vector<FirFilter> bank = design_bank(choice.bands, choice.window,
                                            args.taps, args.sample_rate_hz,
                                            &warnings);
  if (args.normalize) {
    for (FirFilter& f : bank) f = peak_normalize(f);
  }

  fs::create_directories(args.out_dir);
  std::ostringstream report;
  report << "bank: " << choice.label << '\n'
         << "window: " << window_name(choice.window) << '\n'
         << "taps: " << args.taps << '\n'
         << "sample_rate_hz: " << fmt(args.sample_rate_hz) << '\n'
         << "format: Q" << format.total_bits - format.fraction_bits - 1 << '.'
         << format.fraction_bits << " (" << format.total_bits << " bits, "
         << format.fraction_bits << " fraction)" << '\n'
         << "radix: " << args.radix << '\n'
         << "normalized: " << (args.normalize ? "yes" : "no") << '\n'
         << "output_bits_for_8bit_input: "
         << output_bit_width(8, format.total_bits, args.taps) << '\n';

  for (int k = 0; k < kBandsPerBank; ++k) {
    const FirFilter& filter = bank[k];
    const QuantizedFilter q = quantize(filter.coefficients, format);

    std::string csv = "tap,coefficient\n";
    for (int n = 0; n < filter.n_taps(); ++n) {
      csv += std::to_string(n) + ',' + fmt(filter.coefficients[n]) + '\n';
    }
    write_file(fs::path(args.out_dir) / ("band_" + two_digits(k) + ".csv"), csv);
    write_file(fs::path(args.out_dir) / ("band_" + two_digits(k) + ".coe"),
               write_coe(q, args.radix));

    report << "band " << k + 1 << ": " << fmt(filter.band.lower_hz) << " - "
           << fmt(filter.band.upper_hz) << " Hz\n";
  }
  if (warnings.empty()) {
    report << "feasibility warnings: none\n";
  } else {
    report << "feasibility warnings:\n";
    for (const auto& w : warnings) {
      report << "  " << w.describe() << '\n';
      std::cerr << "warning: " << w.describe() << '\n';
    }
  }
  write_file(fs::path(args.out_dir) / "report.txt", report.str());
  std::cout << report.str();
  return 0;
}

struct SimulateArgs {
  std::string scale = "mel";
  int variant = 1;
  std::string bands_file;
  std::string window;
  int taps = 63;
  double clock_hz = 50.0e6;
  double target_hz = 0.0;
  std::uint64_t n_samples = 0;
  std::string duration;
  double amplitude = 1.0;
  int accumulator_bits = 32;
  bool allow_large = false;
  std::string out_dir = ".";
};

int run_simulate(const SimulateArgs& args) {
  const BankChoice choice =
      resolve_bank(args.scale, args.variant, args.bands_file, args.window);
  std::uint64_t n_samples = args.n_samples;
  if (!args.duration.empty()) {
    if (n_samples != 0) {
      throw std::invalid_argument("pass either --samples or --duration");
    }
    const double seconds = parse_duration_seconds(args.duration);
    if (seconds <= 0.0) throw std::invalid_argument("duration must be positive");
    n_samples = static_cast<std::uint64_t>(std::llround(seconds * args.clock_hz));
  }
  if (n_samples == 0) {
    throw std::invalid_argument("pass --samples or --duration");
  }
  if (n_samples > 10'000'000 && !args.allow_large) {
    throw std::invalid_argument(
        "requested " + std::to_string(n_samples) +
        " samples; pass --allow-large to confirm runs above 1e7");
  }

  const DdsConfig dds{args.clock_hz, args.target_hz, args.accumulator_bits,
                      args.amplitude};
  const Signal stimulus = dds_sine(dds, n_samples);
  const std::vector<FirFilter> bank =
      design_bank(choice.bands, choice.window, args.taps, args.clock_hz);
  const BankRunResult result = run_bank(bank, stimulus);

  fs::create_directories(args.out_dir);
  std::string traces = "sample_index";
  for (int k = 0; k < kBandsPerBank; ++k) traces += ",filter_" + two_digits(k);
  traces += ",summed\n";
  for (std::uint64_t n = 0; n < n_samples; ++n) {
    traces += std::to_string(n);
    for (int k = 0; k < kBandsPerBank; ++k) {
      traces += ',' + fmt(result.per_filter_outputs[k].samples[n]);
    }
    traces += ',' + fmt(result.summed_output.samples[n]) + '\n';
  }
  write_file(fs::path(args.out_dir) / "outputs.csv", traces);

  std::string energies = "band_index,energy\n";
  for (int k = 0; k < kBandsPerBank; ++k) {
    energies += std::to_string(k + 1) + ',' + fmt(result.band_energies[k]) + '\n';
  }
  write_file(fs::path(args.out_dir) / "energies.csv", energies);

  const int best = result.argmax_band();
  std::cout << "bank: " << choice.label << '\n'
            << "taps: " << args.taps << '\n'
            << "clock_hz: " << fmt(args.clock_hz) << '\n'
            << "target_hz: " << fmt(args.target_hz) << '\n'
            << "actual_hz: " << fmt(dds_actual_hz(dds)) << '\n'
            << "amplitude: " << fmt(args.amplitude) << '\n'
            << "accumulator_bits: " << args.accumulator_bits << '\n'
            << "samples: " << n_samples << '\n'
            << "argmax band: " << best + 1 << " ("
            << fmt(choice.bands[best].lower_hz) << " - "
            << fmt(choice.bands[best].upper_hz) << " Hz)\n";
  return 0;
}

struct ResponseArgs {
  std::string scale = "mel";
  int variant = 1;
  std::string bands_file;
  std::string window;
  int taps = 63;
  double sample_rate_hz = 50.0e6;
  int n_points = 512;
  std::string out_dir = ".";
};

int run_response(const ResponseArgs& args) {
  const BankChoice choice =
      resolve_bank(args.scale, args.variant, args.bands_file, args.window);
  const std::vector<FirFilter> bank = design_bank(
      choice.bands, choice.window, args.taps, args.sample_rate_hz);

  fs::create_directories(args.out_dir);
  std::vector<FrequencyResponse> responses;
  responses.reserve(kBandsPerBank);
  for (int k = 0; k < kBandsPerBank; ++k) {
    responses.push_back(frequency_response(bank[k], args.n_points));
    std::string csv = "frequency_hz,magnitude_db,phase_rad\n";
    for (int p = 0; p < args.n_points; ++p) {
      csv += fmt(responses[k].frequency_hz[p]) + ',' +
             fmt(responses[k].magnitude_db[p]) + ',' +
             fmt(responses[k].phase_rad[p]) + '\n';
    }
    write_file(
        fs::path(args.out_dir) / ("response_band_" + two_digits(k) + ".csv"),
        csv);
  }

  std::string combined = "frequency_hz";
  for (int k = 0; k < kBandsPerBank; ++k) {
    combined += ",band_" + two_digits(k) + "_db";
  }
  combined += '\n';
  for (int p = 0; p < args.n_points; ++p) {
    combined += fmt(responses[0].frequency_hz[p]);
    for (int k = 0; k < kBandsPerBank; ++k) {
      combined += ',' + fmt(responses[k].magnitude_db[p]);
    }
    combined += '\n';
  }
  write_file(fs::path(args.out_dir) / "response_combined.csv", combined);

  std::cout << "bank: " << choice.label << '\n'
            << "taps: " << args.taps << '\n'
            << "sample_rate_hz: " << fmt(args.sample_rate_hz) << '\n'
            << "points: " << args.n_points << '\n'
            << "wrote 13 per-band response files and response_combined.csv to "
            << args.out_dir << '\n';
  return 0;
}

struct CompareArgs {
  std::string scale_a = "mel";
  int variant_a = 2;
  std::string scale_b = "bark";
  int variant_b = 2;
  int taps = 63;
  double sample_rate_hz = 50.0e6;
  int n_points = 512;
  std::string out_dir = ".";
};

int run_compare(const CompareArgs& args) {
  const BankPreset preset_a = load_preset(parse_scale(args.scale_a), args.variant_a);
  const BankPreset preset_b = load_preset(parse_scale(args.scale_b), args.variant_b);
  const std::vector<FirFilter> bank_a =
      design_bank(preset_a, args.taps, args.sample_rate_hz);
  const std::vector<FirFilter> bank_b =
      design_bank(preset_b, args.taps, args.sample_rate_hz);
  const BankComparison cmp = compare_banks(bank_a, bank_b, args.n_points);

  fs::create_directories(args.out_dir);
  std::string csv = "band,cosine,coeff_rms_diff,response_rms_diff_db\n";
  double cosine_sum = 0.0, response_sum = 0.0;
  for (int k = 0; k < kBandsPerBank; ++k) {
    csv += std::to_string(k + 1) + ',' + fmt(cmp.per_band_cosine[k]) + ',' +
           fmt(cmp.per_band_rms_diff[k]) + ',' +
           fmt(cmp.response_rms_diff_db[k]) + '\n';
    cosine_sum += cmp.per_band_cosine[k];
    response_sum += cmp.response_rms_diff_db[k];
  }
  const double mean_cosine = cosine_sum / kBandsPerBank;
  const double mean_response = response_sum / kBandsPerBank;
  write_file(fs::path(args.out_dir) / "comparison.csv", csv);

  std::cout << "bank a: " << args.scale_a << "-" << args.variant_a << '\n'
            << "bank b: " << args.scale_b << "-" << args.variant_b << '\n'
            << "taps: " << args.taps << '\n'
            << "sample_rate_hz: " << fmt(args.sample_rate_hz) << '\n'
            << "points: " << args.n_points << '\n'
            << "mean cosine: " << fmt(mean_cosine) << '\n'
            << "mean response rms diff db: " << fmt(mean_response) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mel/Bark thirteen-band FIR filter bank designer and simulator"};
  app.require_subcommand(1);

  PresetsArgs presets_args;
  CLI::App* presets = app.add_subcommand(
      "presets", "Print the built-in band tables with validator findings");
  presets->add_option("--scale", presets_args.scale, "mel or bark");
  presets->add_option("--variant", presets_args.variant, "preset variant 1..3");
  presets->add_option("--export", presets_args.export_path,
                      "write the selected preset as a band CSV document");

  DesignArgs design_args;
  CLI::App* design = app.add_subcommand(
      "design", "Design a 13-band bank and write COE/CSV coefficient files");
  design->add_option("--scale", design_args.scale, "mel or bark");
  design->add_option("--variant", design_args.variant, "preset variant 1..3");
  design->add_option("--bands", design_args.bands_file,
                     "band CSV document instead of a preset");
  design->add_option("--window", design_args.window,
                     "window for --bands (bartlett or hamming)");
  design->add_option("--taps", design_args.taps, "odd FIR tap count");
  design->add_option("--fs", design_args.sample_rate_hz, "sample rate in Hz");
  design->add_option("--total-bits", design_args.total_bits,
                     "coefficient width in bits");
  design->add_option("--frac-bits", design_args.fraction_bits,
                     "fraction bits of the fixed-point format");
  design->add_option("--radix", design_args.radix, "COE radix: 2, 10 or 16");
  design->add_flag("--normalize", design_args.normalize,
                   "peak-normalize each filter before quantization");
  design->add_option("--out", design_args.out_dir, "output directory");

  SimulateArgs sim_args;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Run a DDS sine through a designed bank and export traces");
  simulate->add_option("--scale", sim_args.scale, "mel or bark");
  simulate->add_option("--variant", sim_args.variant, "preset variant 1..3");
  simulate->add_option("--bands", sim_args.bands_file,
                       "band CSV document instead of a preset");
  simulate->add_option("--window", sim_args.window,
                       "window for --bands (bartlett or hamming)");
  simulate->add_option("--taps", sim_args.taps, "odd FIR tap count");
  simulate->add_option("--clock", sim_args.clock_hz,
                       "DDS clock / sample rate in Hz");
  simulate->add_option("--target", sim_args.target_hz, "stimulus frequency in Hz")
      ->required();
  simulate->add_option("--samples", sim_args.n_samples, "number of samples");
  simulate->add_option("--duration", sim_args.duration,
                       "simulation length, e.g. 1200us, 1.2ms, 0.0012s");
  simulate->add_option("--amplitude", sim_args.amplitude, "sine amplitude (0, 1]");
  simulate->add_option("--acc-bits", sim_args.accumulator_bits,
                       "DDS accumulator bits");
  simulate->add_flag("--allow-large", sim_args.allow_large,
                     "confirm runs above 1e7 samples");
  simulate->add_option("--out", sim_args.out_dir, "output directory");

  ResponseArgs response_args;
  CLI::App* response = app.add_subcommand(
      "response", "Export per-band and combined magnitude/phase responses");
  response->add_option("--scale", response_args.scale, "mel or bark");
  response->add_option("--variant", response_args.variant, "preset variant 1..3");
  response->add_option("--bands", response_args.bands_file,
                       "band CSV document instead of a preset");
  response->add_option("--window", response_args.window,
                       "window for --bands (bartlett or hamming)");
  response->add_option("--taps", response_args.taps, "odd FIR tap count");
  response->add_option("--fs", response_args.sample_rate_hz, "sample rate in Hz");
  response->add_option("--points", response_args.n_points,
                       "response points in [0, Nyquist]");
  response->add_option("--out", response_args.out_dir, "output directory");

  CompareArgs compare_args;
  CLI::App* compare = app.add_subcommand(
      "compare", "Compare two preset banks coefficient- and response-wise");
  compare->add_option("--scale-a", compare_args.scale_a, "first bank scale");
  compare->add_option("--variant-a", compare_args.variant_a, "first bank variant");
  compare->add_option("--scale-b", compare_args.scale_b, "second bank scale");
  compare->add_option("--variant-b", compare_args.variant_b,
                      "second bank variant");
  compare->add_option("--taps", compare_args.taps, "odd FIR tap count");
  compare->add_option("--fs", compare_args.sample_rate_hz, "sample rate in Hz");
  compare->add_option("--points", compare_args.n_points, "response points");
  compare->add_option("--out", compare_args.out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (presets->parsed()) return run_presets(presets_args);
    if (design->parsed()) return run_design(design_args);
    if (simulate->parsed()) return run_simulate(sim_args);
    if (response->parsed()) return run_response(response_args);
    if (compare->parsed()) return run_compare(compare_args);
  } catch (const design_error& e) {
    std::cerr << "design error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
