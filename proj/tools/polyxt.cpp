// polyxt command-line front end. Every command writes JSON/CSV artifacts
// and maps outcomes to exit codes: 0 success, 1 verification failure or
// nothing found, 2 invalid input, 3 undecided at the precision cap.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "polyxt/polyxt.hpp"

namespace {

using namespace polyxt;
using io::Json;

int exit_code_for(ErrorCode c) {
  switch (c) {
  case ErrorCode::Indeterminate:
    return 3;
  case ErrorCode::NotFound:
  case ErrorCode::SubVerificationFailed:
  case ErrorCode::NegativeCoefficient:
  case ErrorCode::NegativeReducedEntry:
  case ErrorCode::ConeMembershipFailed:
  case ErrorCode::DecompositionFailed:
  case ErrorCode::ChunkNotCertifiable:
  case ErrorCode::HypothesesNotCertified:
  case ErrorCode::ProfileTooAggressive:
    return 1;
  default:
    return 2;
  }
}

void emit(const std::string &out, const std::string &content) {
  if (out.empty() || out == "-")
    std::cout << content;
  else
    io::write_file(out, content);
}

VertexSequence load_polygon(const std::string &path) {
  return io::polygon_from_json(io::parse_json(io::read_file(path)));
}

Matrix load_matrix(const std::string &path) { return io::matrix_from_csv(io::read_file(path)); }

// Accepts a bare factorization or any document with a "factorization" member.
Factorization load_factorization(const std::string &path) {
  const Json j = io::parse_json(io::read_file(path));
  if (j.contains("factorization"))
    return io::factorization_from_json(j.at("factorization"));
  return io::factorization_from_json(j);
}

AdmissibleProfile profile_named(const std::string &name, std::size_t n) {
  if (name == "gentle")
    return gentle_profile(n);
  if (name == "medium")
    return medium_profile(n);
  if (name == "strict")
    return strict_profile(n);
  fail(ErrorCode::InvalidArgument, "unknown profile '" + name + "'");
}

struct Options {
  std::size_t threads = 1;
  std::optional<std::uint64_t> seed;
  unsigned precision = default_precision();

  std::string in, out, matrix, fact;
  std::string kind = "admissible";
  std::string profile = "gentle";
  std::string route = "auto";
  std::size_t n = 16;
  std::size_t rows = 0, cols = 0;
  std::size_t target = 8;
  std::uint64_t samples = 0;
  bool sufficient = false;
  bool timings = false;
  std::string extraction;
  std::string chunks;
  bool escalate = false;
};

std::uint64_t need_seed(const Options &o, const char *what) {
  if (!o.seed)
    fail(ErrorCode::InvalidArgument, std::string(what) + " is randomized and needs --seed");
  return *o.seed;
}

int cmd_generate(const Options &o) {
  if (o.kind == "admissible") {
    emit(o.out, io::dump(io::to_json(generate_admissible(o.n, profile_named(o.profile, o.n)))));
  } else if (o.kind == "random") {
    emit(o.out, io::dump(io::to_json(generate_random_convex(o.n, need_seed(o, "generate --kind random")))));
  } else if (o.kind == "regular") {
    emit(o.out, io::dump(io::to_json(generate_regular(o.n, o.precision))));
  } else if (o.kind == "rank3") {
    const auto inst = generate_rank3_matrix(o.rows, o.cols, need_seed(o, "generate --kind rank3"));
    emit(o.out, io::to_csv(inst.matrix));
  } else {
    fail(ErrorCode::InvalidArgument, "unknown --kind '" + o.kind + "'");
  }
  return 0;
}

int cmd_slack(const Options &o) {
  emit(o.out, io::to_csv(slack_matrix(load_polygon(o.in)).entries));
  return 0;
}

int cmd_admissible(const Options &o) {
  const VertexSequence seq = load_polygon(o.in);
  Json j;
  bool ok = false;
  if (o.sufficient) {
    const auto rep = check_sufficient_conditions(seq, o.precision);
    j = io::to_json(rep);
    ok = rep.all();
  } else if (o.samples > 0) {
    const auto rep = is_admissible_sampled(seq, o.samples, need_seed(o, "admissible --samples"));
    j = io::to_json(rep);
    ok = rep.admissible;
  } else {
    const auto rep = is_admissible_exact(seq, std::max(kDefaultExhaustiveCap, seq.size()));
    j = io::to_json(rep);
    ok = rep.admissible;
  }
  emit(o.out, io::dump(j));
  return ok ? 0 : 1;
}

int cmd_extract(const Options &o) {
  ExtractionParams p;
  p.target_n = o.target;
  p.precision = o.precision;
  const auto r = extract_admissible(load_polygon(o.in), p);
  emit(o.out, io::dump(io::to_json(r)));
  return r.verified ? 0 : 1;
}

int cmd_factorize(const Options &o) {
  VertexSequence seq = o.in.empty() ? VertexSequence{} : load_polygon(o.in);
  Factorization f;
  ExtensionCertificate cert;
  if (o.escalate) {
    auto built = generate_and_factor(o.n, escalation_schedule(o.n));
    seq = built.polygon;
    f = std::move(built.build.factorization);
    cert = std::move(built.build.certificate);
    cert.notes.push_back("generated with profile " + std::string(to_string(built.profile.family)) + " after " +
                         std::to_string(built.attempts) + " attempt(s)");
  } else if (o.route == "trivial") {
    f = trivial_factorization(slack_matrix(seq).entries);
    cert = certify(seq, f, "trivial", "n", seq.size());
  } else if (o.route == "square") {
    auto sq = factor_admissible_square(seq);
    f = std::move(sq.factorization);
    cert = certify(seq, f, "square", "15m-3", 15 * sq.m - 3);
  } else if (o.route == "auto" || o.route == "chunked") {
    auto built = factor_admissible(seq);
    f = std::move(built.factorization);
    cert = std::move(built.certificate);
  } else {
    fail(ErrorCode::InvalidArgument, "unknown --route '" + o.route + "'");
  }
  emit(o.out, io::dump(io::certificate_bundle(cert, f, o.timings)));
  return cert.verdict ? 0 : 1;
}

int cmd_verify(const Options &o) {
  const Factorization f = load_factorization(o.fact);
  VerificationReport rep;
  if (!o.matrix.empty()) {
    const Matrix m = load_matrix(o.matrix);
    if (m.rows() != f.rows || m.cols() != f.cols)
      fail(ErrorCode::DimensionMismatch, "factorization shape does not match the matrix");
    rep = verify_factorization(m, f);
  } else {
    const VertexSequence seq = load_polygon(o.in);
    require_proper(seq);
    if (seq.size() != f.rows || seq.size() != f.cols)
      fail(ErrorCode::DimensionMismatch, "factorization shape does not match the polygon");
    rep = verify_factorization(seq, f);
  }
  emit(o.out, io::dump(io::to_json(rep)));
  return rep.passed ? 0 : 1;
}

int cmd_nmf(const Options &o) {
  const auto r = nmf_rank3(load_matrix(o.matrix));
  emit(o.out, io::dump(io::to_json(r)));
  return r.report.verified ? 0 : 1;
}

int cmd_rank(const Options &o) {
  std::cout << exact_rank(load_matrix(o.matrix)) << "\n";
  return 0;
}

int cmd_plot(const Options &o) {
  const VertexSequence seq = load_polygon(o.in);
  io::PlotAnnotations ann;
  ann.title = "polygon " + polygon_hash(seq);
  if (o.chunks == "auto") {
    std::size_t m = 0;
    while ((m + 1) * (m + 1) <= seq.size())
      ++m;
    if (m * m == seq.size())
      ann.chunks = {{0, seq.size()}};
    else
      ann.chunks = {{0, m * m}, {m * m, seq.size() - m * m}};
  } else if (!o.chunks.empty()) {
    fail(ErrorCode::InvalidArgument, "--chunks accepts only 'auto'");
  }
  if (!o.extraction.empty()) {
    const Json j = io::parse_json(io::read_file(o.extraction));
    for (const auto &i : j.at("indices"))
      ann.highlights.push_back(i.get<std::size_t>() - 1);
  }
  emit(o.out, io::plot_svg(seq, ann));
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"polyxt: exact small factorizations of convex-polygon slack matrices"};
  app.require_subcommand(1);
  Options o;
  std::uint64_t seed = 0;
  auto *seed_opt = app.add_option("--seed", seed, "seed for randomized commands");
  app.add_option("--threads", o.threads, "worker threads (0 = hardware concurrency)");
  app.add_option("--precision", o.precision, "starting interval precision in bits")
      ->check(CLI::Range(16u, static_cast<unsigned>(kMaxPrecision)));

  auto add_out = [&](CLI::App *c) { c->add_option("-o,--out", o.out, "output path (default stdout)"); };
  auto add_in = [&](CLI::App *c, bool required) {
    auto *opt = c->add_option("-i,--in", o.in, "polygon JSON")->check(CLI::ExistingFile);
    if (required)
      opt->required();
  };

  auto *gen = app.add_subcommand("generate", "generate a polygon or a rank-3 matrix");
  gen->add_option("--kind", o.kind, "admissible | random | regular | rank3")
      ->check(CLI::IsMember({"admissible", "random", "regular", "rank3"}));
  gen->add_option("-n,--n", o.n, "number of vertices");
  gen->add_option("--profile", o.profile, "gentle | medium | strict")
      ->check(CLI::IsMember({"gentle", "medium", "strict"}));
  gen->add_option("--rows", o.rows, "rank3 rows");
  gen->add_option("--cols", o.cols, "rank3 columns");
  add_out(gen);

  auto *slack = app.add_subcommand("slack", "write the exact slack matrix as CSV");
  add_in(slack, true);
  add_out(slack);

  auto *adm = app.add_subcommand("admissible", "check admissibility");
  add_in(adm, true);
  adm->add_option("--samples", o.samples, "sample this many quadruples instead of all");
  adm->add_flag("--sufficient", o.sufficient, "check the sufficient thin/monotone conditions instead");
  add_out(adm);

  auto *ext = app.add_subcommand("extract", "extract an admissible subsequence");
  add_in(ext, true);
  ext->add_option("--target", o.target, "subsequence length");
  add_out(ext);

  auto *fac = app.add_subcommand("factorize", "build and certify a factorization of the slack matrix");
  add_in(fac, false);
  fac->add_option("--route", o.route, "auto | square | chunked | trivial")
      ->check(CLI::IsMember({"auto", "square", "chunked", "trivial"}));
  fac->add_flag("--escalate", o.escalate, "generate an admissible n-gon, escalating profiles, then factor it");
  fac->add_option("-n,--n", o.n, "vertex count with --escalate");
  fac->add_flag("--timings", o.timings, "include wall-clock seconds in the certificate");
  add_out(fac);

  auto *ver = app.add_subcommand("verify", "verify a factorization exactly");
  auto *mat_opt = ver->add_option("--matrix", o.matrix, "matrix CSV")->check(CLI::ExistingFile);
  auto *poly_opt = ver->add_option("-i,--in", o.in, "polygon JSON (verify against its slack matrix)")
                       ->check(CLI::ExistingFile);
  mat_opt->excludes(poly_opt);
  ver->add_option("--fact", o.fact, "factorization or certificate JSON")->required()->check(CLI::ExistingFile);
  add_out(ver);

  auto *nmf = app.add_subcommand("nmf", "exact nonnegative factorization of a rank-3 matrix");
  nmf->add_option("--matrix", o.matrix, "matrix CSV")->required()->check(CLI::ExistingFile);
  add_out(nmf);

  auto *rank = app.add_subcommand("rank", "exact rank of a matrix");
  rank->add_option("--matrix", o.matrix, "matrix CSV")->required()->check(CLI::ExistingFile);

  auto *plot = app.add_subcommand("plot", "SVG figure of a polygon");
  add_in(plot, true);
  plot->add_option("--chunks", o.chunks, "'auto' draws the builder's chunk arcs");
  plot->add_option("--extraction", o.extraction, "extraction JSON whose vertices are highlighted")
      ->check(CLI::ExistingFile);
  add_out(plot);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (*seed_opt)
    o.seed = seed;

  try {
    set_threads(o.threads);
    if (ver->parsed() && o.matrix.empty() && o.in.empty())
      fail(ErrorCode::InvalidArgument, "verify needs --matrix or --in");
    if (fac->parsed() && !o.escalate && o.in.empty())
      fail(ErrorCode::InvalidArgument, "factorize needs --in or --escalate");
    if (gen->parsed())
      return cmd_generate(o);
    if (slack->parsed())
      return cmd_slack(o);
    if (adm->parsed())
      return cmd_admissible(o);
    if (ext->parsed())
      return cmd_extract(o);
    if (fac->parsed())
      return cmd_factorize(o);
    if (ver->parsed())
      return cmd_verify(o);
    if (nmf->parsed())
      return cmd_nmf(o);
    if (rank->parsed())
      return cmd_rank(o);
    if (plot->parsed())
      return cmd_plot(o);
  } catch (const Error &e) {
    std::cerr << Json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}}.dump() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception &e) {
    std::cerr << Json{{"error", "Internal"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }
  return 2;
}
