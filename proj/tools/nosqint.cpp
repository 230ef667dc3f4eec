// nosqint: command-line front end for the integration pipeline.
// Stages communicate exclusively through files: induce writes ontology and
// mapping JSON, align writes alignment JSON, merge writes a global bundle,
// query loads the bundle plus the catalog and answers SPARQL over it.
// Exit codes: 0 success, 1 domain error (printed as "module: Kind: message"),
// 2 usage error.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "nosqint/alignment.hpp"
#include "nosqint/bql.hpp"
#include "nosqint/dlcore.hpp"
#include "nosqint/globalont.hpp"
#include "nosqint/induction.hpp"
#include "nosqint/io.hpp"
#include "nosqint/queryfront.hpp"
#include "nosqint/store.hpp"

namespace {

using namespace nosqint;

// "full" or "freq:LOG:TOPN". The last colon splits off TOPN so LOG may
// itself contain colons. Malformed specs are usage errors; a parsed but
// invalid TOPN (< 1) is rejected by the induction module instead.
SamplingStrategy parse_strategy(const std::string& spec) {
    if (spec == "full") return SamplingStrategy::full();
    if (spec.rfind("freq:", 0) == 0) {
        const std::string rest = spec.substr(5);
        const size_t cut = rest.rfind(':');
        if (cut != std::string::npos && cut > 0 && cut + 1 < rest.size()) {
            const std::string digits = rest.substr(cut + 1);
            size_t seen = 0;
            long long topN = 0;
            try {
                topN = std::stoll(digits, &seen);
            } catch (const std::exception&) {
                seen = 0;
            }
            if (seen == digits.size()) {
                if (topN < 1) throw Error("induction", "InvalidArgument", "frequency strategy needs topN >= 1");
                return SamplingStrategy::frequency_log(rest.substr(0, cut), static_cast<size_t>(topN));
            }
        }
    }
    throw CLI::ValidationError("--strategy: expected 'full' or 'freq:LOG:TOPN', got '" + spec + "'");
}

struct InduceOpts {
    std::string catalog;
    std::string database;
    std::string strategy = "full";
    std::string out;
    std::string mappingsOut;
};

void run_induce(const InduceOpts& o) {
    const SourceCatalog catalog = load_catalog(o.catalog);
    const InductionResult r = induce_local(catalog, o.database, parse_strategy(o.strategy));
    // Every JSON output is re-read through its parser before we report success.
    write_text_file(o.out, serialize_ontology(r.ontology));
    parse_ontology(read_text_file(o.out));
    if (!o.mappingsOut.empty()) {
        write_text_file(o.mappingsOut, serialize_mappings(r.mappings));
        parse_mappings(read_text_file(o.mappingsOut));
    }
}

struct AlignOpts {
    std::string left;
    std::string right;
    std::string synonyms;
    bool complex = false;
    std::string out;
};

void run_align(const AlignOpts& o) {
    const Ontology left = parse_ontology(read_text_file(o.left));
    const Ontology right = parse_ontology(read_text_file(o.right));
    MatcherConfig cfg;
    if (!o.synonyms.empty()) cfg.synonymTable = load_synonyms(o.synonyms);
    // Matching runs on the saturated ontologies; the files keep the raw ones.
    const Ontology sl = saturate(left);
    const Ontology sr = saturate(right);
    Alignment a = align_simple(sl, sr, cfg);
    if (o.complex) {
        const Alignment cx = align_complex(sl, sr, a, cfg);
        for (const auto& cell : cx.cells) a.add_cell(cell);
    }
    write_text_file(o.out, serialize_alignment(a));
    parse_alignment(read_text_file(o.out));
}

struct MergeOpts {
    std::vector<std::string> ontologies;
    std::vector<std::string> alignments;
    std::vector<std::string> mappings;
    std::string out;
};

void run_merge(const MergeOpts& o) {
    if (o.mappings.size() != o.ontologies.size()) {
        throw CLI::ValidationError("--mappings: expected one mappings file per ontology (got " +
                                   std::to_string(o.mappings.size()) + " for " + std::to_string(o.ontologies.size()) +
                                   " ontologies)");
    }
    std::vector<Ontology> ontos;
    ontos.reserve(o.ontologies.size());
    for (const auto& p : o.ontologies) ontos.push_back(parse_ontology(read_text_file(p)));
    std::vector<Alignment> aligns;
    aligns.reserve(o.alignments.size());
    for (const auto& p : o.alignments) aligns.push_back(parse_alignment(read_text_file(p)));
    // The i-th mappings file belongs to the i-th ontology.
    std::map<std::string, MappingSet> mappings;
    std::map<std::string, std::string> mappingFiles;
    const std::filesystem::path bundleDir = [&] {
        const std::filesystem::path parent = std::filesystem::path(o.out).parent_path();
        return parent.empty() ? std::filesystem::path(".") : parent;
    }();
    // Bundle references are stored relative to the bundle file, so the bundle
    // stays loadable from any working directory and moves with its directory.
    const auto rel = [&](const std::string& p) { return std::filesystem::proximate(p, bundleDir).generic_string(); };
    for (size_t i = 0; i < ontos.size(); ++i) {
        mappings[ontos[i].id] = parse_mappings(read_text_file(o.mappings[i]));
        mappingFiles[ontos[i].id] = rel(o.mappings[i]);
    }
    const GlobalOntology go = build_global(ontos, aligns, mappings);
    std::vector<std::string> ontologyFiles;
    ontologyFiles.reserve(o.ontologies.size());
    for (const auto& p : o.ontologies) ontologyFiles.push_back(rel(p));
    std::vector<std::string> alignmentFiles;
    alignmentFiles.reserve(o.alignments.size());
    for (const auto& p : o.alignments) alignmentFiles.push_back(rel(p));
    write_text_file(o.out, serialize_global_bundle(go, ontologyFiles, alignmentFiles, mappingFiles));
    load_global_bundle(o.out);
}

struct QueryOpts {
    std::string global;
    std::string catalog;
    std::string sparql;
    bool explain = false;
    std::string emit;
};

void run_query(const QueryOpts& o) {
    const GlobalOntology go = load_global_bundle(o.global);
    const SourceCatalog catalog = load_catalog(o.catalog);
    const SparqlQuery q = parse_sparql(read_text_file(o.sparql));
    const std::vector<BqlProgram> programs = translate(q, go);
    if (o.explain) {
        // A single program prints bare; several are separated by "# <db>"
        // headers so the per-source texts stay machine-splittable.
        std::string text;
        for (const auto& p : programs) {
            if (programs.size() > 1) text += "# " + p.source + "\n";
            text += explain_text(p);
        }
        std::cout << text;
        return;
    }
    if (!o.emit.empty()) {
        const PlanDialect dialect = o.emit == "doc" ? PlanDialect::DocApi : PlanDialect::ColumnApi;
        for (const auto& p : programs) std::cout << emit_plan(p, dialect);
        return;
    }
    const ResultTable t = execute_union(programs, catalog);
    std::cout << result_to_json(t).dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    // NOSQINT_SEED fixes any tie-breaking salt (default 0). Every stage is
    // deterministic today, so the value is accepted and reserved.
    const char* seedEnv = std::getenv("NOSQINT_SEED");
    const unsigned long long tieSalt = seedEnv ? std::strtoull(seedEnv, nullptr, 10) : 0ULL;
    (void)tieSalt;

    CLI::App app{"ontology-mediated access to schemaless document and column stores"};
    app.name("nosqint");
    app.require_subcommand(1);

    InduceOpts induceOpts;
    CLI::App* induce = app.add_subcommand("induce", "Induce a local ontology from one database of a catalog");
    induce->add_option("--catalog", induceOpts.catalog, "store catalog JSON")->required();
    induce->add_option("--database", induceOpts.database, "database name inside the catalog")->required();
    induce->add_option("--strategy", induceOpts.strategy, "full or freq:LOG:TOPN (default full)");
    induce->add_option("--out", induceOpts.out, "output path for the ontology JSON")->required();
    induce->add_option("--mappings-out", induceOpts.mappingsOut, "optional output path for the mapping JSON");
    induce->callback([&] { run_induce(induceOpts); });

    AlignOpts alignOpts;
    CLI::App* align = app.add_subcommand("align", "Align two ontology files");
    align->add_option("--left", alignOpts.left, "left ontology JSON")->required();
    align->add_option("--right", alignOpts.right, "right ontology JSON")->required();
    align->add_option("--synonyms", alignOpts.synonyms, "tab-separated synonym table");
    align->add_flag("--complex", alignOpts.complex, "also emit complex (formula) correspondences");
    align->add_option("--out", alignOpts.out, "output path for the alignment JSON")->required();
    align->callback([&] { run_align(alignOpts); });

    MergeOpts mergeOpts;
    CLI::App* merge = app.add_subcommand("merge", "Merge ontologies and alignments into a global bundle");
    merge->add_option("--ontologies", mergeOpts.ontologies, "ontology JSON files")->required()->expected(-1);
    merge->add_option("--alignments", mergeOpts.alignments, "alignment JSON files")->expected(-1);
    merge->add_option("--mappings", mergeOpts.mappings, "mapping JSON files, one per ontology, in the same order")
        ->required()
        ->expected(-1);
    merge->add_option("--out", mergeOpts.out, "output path for the global bundle JSON")->required();
    merge->callback([&] { run_merge(mergeOpts); });

    QueryOpts queryOpts;
    CLI::App* query = app.add_subcommand("query", "Answer a SPARQL query over a global bundle");
    query->add_option("--global", queryOpts.global, "global bundle JSON")->required();
    query->add_option("--catalog", queryOpts.catalog, "store catalog JSON")->required();
    query->add_option("--sparql", queryOpts.sparql, "SPARQL query file")->required();
    CLI::Option* explainOpt = query->add_flag("--explain", queryOpts.explain, "print the BQL programs, do not execute");
    query->add_option("--emit", queryOpts.emit, "print native access plans: doc or column")
        ->check(CLI::IsMember({"doc", "column"}))
        ->excludes(explainOpt);
    query->callback([&] { run_query(queryOpts); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "nosqint: InternalError: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
