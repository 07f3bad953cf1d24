// Writes the bundled level model: published factor score coefficients, ordinal
// weights and cutpoints, with feature standardization taken from the shipped
// dictionary. Paths in the bundle are stored relative to the bundle file.
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "wordle/bundle.hpp"
#include "wordle/cli.hpp"

int main(int argc, char** argv) {
  namespace fs = std::filesystem;
  CLI::App app{"Build the paper-coefficient model bundle"};
  std::string data_dir = WORDLE_DEFAULT_DATA_DIR;
  std::string out;
  unsigned threads = 0;
  app.add_option("--data-dir", data_dir, "Directory holding dictionary.txt and frequencies.csv")->capture_default_str();
  app.add_option("--out", out, "Output path (default: <data-dir>/paper_bundle.json)");
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");
  CLI11_PARSE(app, argc, argv);

  try {
    const fs::path dir(data_dir);
    const auto lex = wordle::load_dictionary(dir / "dictionary.txt");
    const auto freq = wordle::load_frequencies(dir / "frequencies.csv", lex);
    wordle::ModelBundle b;
    b.markov = wordle::build_markov(lex, 0.0);
    const auto& words = lex.words();
    const auto fv = wordle::cli::detail::compute_features(words, lex, freq, b.markov, {}, threads);
    const auto st = wordle::standardize(fv);
    b.level = wordle::paper_level_model(st.params);
    b.metadata.dictionary_digest = lex.digest();
    b.metadata.dictionary_path = "dictionary.txt";
    b.metadata.frequencies_path = "frequencies.csv";
    b.metadata.created = wordle::utc_timestamp();
    b.metadata.note =
        "published factor score coefficients, ordinal weights and cutpoints; feature standardization "
        "from the shipped dictionary; no deviation model (use predict --e-delta)";
    const fs::path target = out.empty() ? dir / "paper_bundle.json" : fs::path(out);
    wordle::save_bundle(b, target);
    std::cout << target.string() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
