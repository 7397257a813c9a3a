#include "profin/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "profin/errors.hpp"
#include "profin/integral.hpp"
#include "profin/matrioshka.hpp"
#include "profin/metric.hpp"

namespace profin {

namespace {

const std::map<std::string, std::vector<std::string>> kAllowedKeys = {
    {"tower", {"tower", "file", "depth"}},
    {"validate", {"tower", "file", "depth"}},
    {"encode", {"tower", "file", "depth", "element"}},
    {"decode", {"tower", "file", "depth", "bits"}},
    {"blocks", {"tower", "file", "depth", "element"}},
    {"dist", {}},
    {"integral",
     {"tower", "file", "depth", "n", "action", "w", "hbar", "mode", "samples", "seed"}},
    {"partition", {"tower", "file", "depth", "lambda"}},
    {"correlate", {"tower", "file", "depth", "primes", "lambda"}},
};

std::string fmt_g15(double x) {
    if (x == 0) x = 0;  // never print "-0"
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

std::string fmt_complex(std::complex<double> z) {
    double re = z.real(), im = z.imag();
    if (re == 0) re = 0;
    if (im == 0) im = 0;
    if (im < 0) return fmt_g15(re) + " - " + fmt_g15(-im) + "i";
    return fmt_g15(re) + " + " + fmt_g15(im) + "i";
}

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorKind::Usage, "bad " + what + " '" + s + "'");
    }
}

long long parse_int(const std::string& s, const std::string& what) {
    try {
        size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorKind::Usage, "bad " + what + " '" + s + "'");
    }
}

Tower resolve_tower(const Command& cmd) {
    std::string spec;
    if (cmd.has("tower") && cmd.has("file"))
        throw Error(ErrorKind::Usage, "give --tower or --file, not both");
    if (cmd.has("tower")) {
        spec = cmd.get("tower");
    } else if (cmd.has("file")) {
        std::ifstream in(cmd.get("file"));
        if (!in) throw Error(ErrorKind::Usage, "cannot open '" + cmd.get("file") + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        spec = buf.str();
    } else {
        throw Error(ErrorKind::Usage, "missing required --tower (or --file)");
    }
    if (cmd.has("depth")) {
        if (spec.find("depth=") != std::string::npos)
            throw Error(ErrorKind::Usage, "depth given both in spec and as --depth");
        spec += " depth=" + cmd.get("depth");
    }
    return parse_tower_spec(spec);
}

CoherentElement resolve_element(const Tower& t, const std::string& arg) {
    return CoherentElement::from_labels(t, split_on(arg, ','));
}

std::string render_member_tuple(const Tower& t, int level, int index) {
    std::string out = "(";
    GroupElement g{&t.level(level), index};
    for (int k = 1; k <= level; ++k) {
        if (k > 1) out += ",";
        out += project(t, g, k).label();
    }
    return out + ")";
}

ActionFunctional resolve_action(const Command& cmd) {
    if (cmd.has("action") && cmd.has("w"))
        throw Error(ErrorKind::Usage, "give --action or --w, not both");
    if (cmd.has("action")) {
        std::ifstream in(cmd.get("action"));
        if (!in) throw Error(ErrorKind::Usage, "cannot open '" + cmd.get("action") + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse_action(buf.str());
    }
    if (!cmd.has("w"))
        throw Error(ErrorKind::Usage, "missing required --w (or --action)");
    std::vector<Rational> w;
    for (const std::string& tok : split_on(cmd.get("w"), ','))
        w.push_back(rational_from_double(parse_double(tok, "w entry")));
    double hbar = cmd.has("hbar") ? parse_double(cmd.get("hbar"), "hbar") : 1.0;
    return ActionFunctional({}, std::move(w), hbar);
}

std::string run_verb(const Command& cmd) {
    const EncodingConvention conv;
    std::ostringstream out;
    out << "conv=" << conv.version << "\n";

    if (cmd.verb == "dist") {
        const std::string& metric = cmd.positionals[0];
        Word a(cmd.positionals[1]), b(cmd.positionals[2]);
        out << "metric = " << metric << "\n";
        if (metric == "cantor")
            out << "d = " << rational_to_string(cantor_distance(a, b)) << "\n";
        else
            out << "d = " << hamming(a, b) << "\n";
        return out.str();
    }

    Tower t = resolve_tower(cmd);
    out << t.spec_line() << "\n";

    if (cmd.verb == "tower") {
        out << "levels =";
        for (int k = 1; k <= t.depth(); ++k) out << " " << t.level(k).order();
        out << "\n";
        return out.str();
    }

    if (cmd.verb == "validate") {
        TowerValidation v = validate_tower(t);
        for (const auto& b : v.bonds)
            out << "bond " << b.k << ": surjective=" << (b.surjective ? "yes" : "no")
                << " hom=" << (b.hom_law ? "yes" : "no")
                << " strict=" << (b.strict_growth ? "yes" : "no") << "\n";
        out << "valid = " << (v.all_ok() ? "yes" : "no") << "\n";
        return out.str();
    }

    if (cmd.verb == "encode") {
        CoherentElement x = resolve_element(t, cmd.get("element"));
        PartitionTree tree(t, conv);
        out << "element = " << x.to_string() << "\n";
        out << "code = " << tree.encode(x).to_string() << "\n";
        return out.str();
    }

    if (cmd.verb == "decode") {
        PartitionTree tree(t, conv);
        DecodeResult r = tree.decode(cmd.get("bits"));
        out << "bits = " << cmd.get("bits") << "\n";
        if (r.is_element()) {
            out << "element = " << r.element->to_string() << "\n";
        } else {
            out << "cell level = " << r.level << "\n";
            out << "cell =";
            for (int m : r.members) out << " " << render_member_tuple(t, r.level, m);
            out << "\n";
        }
        return out.str();
    }

    if (cmd.verb == "blocks") {
        CoherentElement x = resolve_element(t, cmd.get("element"));
        BlockCode code = block_encode(t, x, conv);
        out << "element = " << x.to_string() << "\n";
        out << "blocks = " << code.serialize() << "\n";
        return out.str();
    }

    if (cmd.verb == "integral") {
        ActionFunctional s = resolve_action(cmd);
        CylinderMeasure mu = haar_measure(t);
        int n = cmd.has("n") ? static_cast<int>(parse_int(cmd.get("n"), "n")) : t.depth();
        std::string mode = cmd.has("mode") ? cmd.get("mode") : "exact";
        if (mode == "exact") {
            PathIntegralResult r = path_integral_exact(mu, s, n);
            out << "I_" << n << " = " << fmt_complex(r.value);
            if (r.delta_prev) out << "  delta = " << fmt_g15(*r.delta_prev);
            out << "\n";
        } else if (mode == "mc") {
            if (!cmd.has("seed"))
                throw Error(ErrorKind::Usage, "mc mode requires --seed");
            if (!cmd.has("samples"))
                throw Error(ErrorKind::Usage, "mc mode requires --samples");
            PathIntegralResult r = path_integral_mc(
                mu, s, n, parse_int(cmd.get("samples"), "samples"),
                static_cast<uint64_t>(parse_int(cmd.get("seed"), "seed")));
            out << "I_" << n << " = " << fmt_complex(r.value)
                << "  stderr = " << fmt_g15(r.stderr_est) << "\n";
            out << "samples = " << r.samples << "\n";
            out << "seed = " << r.seed << "\n";
        } else {
            throw Error(ErrorKind::Usage, "unknown mode '" + mode + "'");
        }
        return out.str();
    }

    if (cmd.verb == "partition") {
        double lambda = parse_double(cmd.get("lambda"), "lambda");
        out << "lambda = " << fmt_g15(lambda) << "\n";
        out << "Z = " << fmt_g15(partition_function(t, lambda)) << "\n";
        return out.str();
    }

    if (cmd.verb == "correlate") {
        double lambda = parse_double(cmd.get("lambda"), "lambda");
        std::vector<long long> primes;
        if (!cmd.get("primes").empty())
            for (const std::string& tok : split_on(cmd.get("primes"), ','))
                primes.push_back(parse_int(tok, "prime"));
        out << "lambda = " << fmt_g15(lambda) << "\n";
        out << "primes =";
        for (long long q : primes) out << " " << q;
        out << "\n";
        out << "corr = " << fmt_complex(frobenius_correlation(t, primes, lambda)) << "\n";
        return out.str();
    }

    throw Error(ErrorKind::Usage, "unknown verb '" + cmd.verb + "'");
}

}  // namespace

Command parse_command(const std::vector<std::string>& argv) {
    if (argv.empty()) throw Error(ErrorKind::Usage, "no verb given");
    Command cmd;
    cmd.verb = argv[0];
    auto allowed = kAllowedKeys.find(cmd.verb);
    if (allowed == kAllowedKeys.end())
        throw Error(ErrorKind::Usage, "unknown verb '" + cmd.verb + "'");

    if (cmd.verb == "dist") {
        for (size_t i = 1; i < argv.size(); ++i) {
            if (argv[i].rfind("--", 0) == 0)
                throw Error(ErrorKind::Usage, "dist takes positionals, got '" + argv[i] + "'");
            cmd.positionals.push_back(argv[i]);
        }
        if (cmd.positionals.size() != 3)
            throw Error(ErrorKind::Usage, "dist needs: dist cantor|hamming <w1> <w2>");
        if (cmd.positionals[0] != "cantor" && cmd.positionals[0] != "hamming")
            throw Error(ErrorKind::Usage, "unknown metric '" + cmd.positionals[0] + "'");
        return cmd;
    }

    for (size_t i = 1; i < argv.size(); ++i) {
        const std::string& tok = argv[i];
        if (tok.rfind("--", 0) != 0)
            throw Error(ErrorKind::Usage, "expected a --flag, got '" + tok + "'");
        std::string key = tok.substr(2);
        if (std::find(allowed->second.begin(), allowed->second.end(), key) ==
            allowed->second.end())
            throw Error(ErrorKind::Usage, "unknown flag '" + tok + "' for verb '" +
                                              cmd.verb + "'");
        if (i + 1 >= argv.size())
            throw Error(ErrorKind::Usage, "flag '" + tok + "' needs a value");
        if (!cmd.args.emplace(key, argv[i + 1]).second)
            throw Error(ErrorKind::Usage, "duplicate flag '" + tok + "'");
        ++i;
    }

    // Required-argument checks, verb by verb.
    auto need = [&](const char* key) {
        if (!cmd.has(key))
            throw Error(ErrorKind::Usage,
                        std::string("missing required --") + key + " for '" + cmd.verb + "'");
    };
    if (cmd.verb != "dist" && !cmd.has("tower") && !cmd.has("file"))
        throw Error(ErrorKind::Usage, "missing required --tower (or --file)");
    if (cmd.verb == "encode" || cmd.verb == "blocks") need("element");
    if (cmd.verb == "decode") need("bits");
    if (cmd.verb == "partition" || cmd.verb == "correlate") need("lambda");
    if (cmd.verb == "correlate") need("primes");
    if (cmd.verb == "integral" && !cmd.has("action") && !cmd.has("w"))
        throw Error(ErrorKind::Usage, "missing required --w (or --action)");
    return cmd;
}

RunReport execute(const Command& cmd) {
    auto t0 = std::chrono::steady_clock::now();
    RunReport rep;
    rep.body = run_verb(cmd);
    rep.exit_code = 0;
    rep.time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    return rep;
}

int cli_main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        Command cmd = parse_command(args);
        RunReport rep = execute(cmd);
        std::cout << rep.body;
        std::cout.flush();
        std::cerr << "time_ms=" << fmt_g15(rep.time_ms) << "\n";
        return rep.exit_code;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace profin
