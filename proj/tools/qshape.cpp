#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qshape/cli.hpp"

namespace {

const char* kCommands[][2] = {
    {"format", "print the workspace in normal form"},
    {"validate", "check the setup conditions on the category"},
    {"homology", "cohomology or Tor of a rep at an object"},
    {"is-exact", "is the rep exact"},
    {"is-weq", "is the morphism a weak equivalence"},
    {"ext", "dimension of Ext^i between two reps"},
    {"suspend", "suspension (or a power of it) of a rep"},
    {"stable-hom", "Hom in the stable category"},
    {"dq-hom", "Hom in the derived category"},
    {"cone", "mapping cone of a morphism"},
    {"classify", "model-structure classes of a morphism"},
    {"perfect", "strict perfection, or check a perfect witness"},
    {"resolve", "projective resolution generators up to a degree"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qshape: representations of Q-shaped categories"};
  app.require_subcommand(1);
  app.fallthrough();
  qshape::cli::Options o;
  std::string file, window, field;
  app.add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--window", window, "object window lo..hi for infinite kinds");
  app.add_option("--field", field, "Q or Fp(p); overrides the file and QSHAPE_FIELD");
  app.add_flag("--full", o.full, "include full matrices in reports");

  for (const auto& [name, help] : kCommands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("file", file, ".qs workspace")->required()->check(CLI::ExistingFile);
    const std::string c = name;
    if (c == "homology" || c == "is-exact" || c == "suspend" || c == "perfect" || c == "resolve")
      sub->add_option("--rep", o.rep)->required();
    if (c == "homology") {
      sub->add_option("--q", o.q)->required();
      sub->add_option("--i", o.i)->required();
      sub->add_flag("--tor", o.tor);
    }
    if (c == "ext") sub->add_option("--i", o.i)->required();
    if (c == "ext" || c == "stable-hom" || c == "dq-hom") {
      sub->add_option("--from", o.from)->required();
      sub->add_option("--to", o.to)->required();
    }
    if (c == "is-weq" || c == "cone" || c == "classify") sub->add_option("--mor", o.mor)->required();
    if (c == "classify")
      sub->add_option("--structure", o.structure)->required()->check(CLI::IsMember({"projective", "injective"}));
    if (c == "suspend") sub->add_option("--power", o.power);
    if (c == "perfect") {
      auto* w = sub->add_option("--witness", o.witness);
      auto* m = sub->add_option("--mor", o.mor);
      w->needs(m);
      m->needs(w);
    }
    if (c == "resolve") sub->add_option("--degree", o.degree)->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  auto* sub = app.get_subcommands().front();
  o.command = sub->get_name();
  if (!window.empty()) o.window = window;
  if (!field.empty()) o.field = field;

  std::ifstream in(file, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    if (o.command == "format") {
      std::cout << qshape::dsl::print(qshape::dsl::parse(buf.str()));
      return 0;
    }
    auto report = qshape::cli::run(o, buf.str());
    std::cout << report.emit(o.format);
    return report.exit_code;
  } catch (const qshape::dsl::SourceError& e) {
    std::cerr << file << ":" << e.what() << "\n";
  } catch (const qshape::cli::UsageError& e) {
    std::cerr << "command line: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << file << ": " << e.what() << "\n";
  }
  return 1;
}
