// Builds the bundled example systems and drops SVG/CSV/JSON artifacts for
// each into an output directory (first argument, default ".").

#include <bifurcus/pipeline.hpp>
#include <bifurcus/render.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

struct Entry {
    const char* name;
    const char* expression;
    const char* state;
    const char* param;
    std::optional<double> domain_min;
};

const Entry gallery[] = {
    {"pitchfork", "lambda*x - x^3", "x", "lambda", std::nullopt},
    {"offset_cubic", "c + (1 + 2*c)*x - x^3", "x", "c", std::nullopt},
    {"offset_cubic_half", "c + (1 + 0.5*c)*x - x^3", "x", "c", std::nullopt},
    {"polar_quintic", "lambda*r - lambda*r^3 + r^5", "r", "lambda", 0.0},
};

void write(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    std::cout << "  wrote " << path.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    std::filesystem::path out_dir = argc > 1 ? argv[1] : ".";
    std::filesystem::create_directories(out_dir);

    for (const Entry& e : gallery) {
        auto sys = bifurcus::expr::parse_system(e.expression, e.state, e.param);
        bifurcus::BuildOptions opt;
        opt.domain_min = e.domain_min;
        opt.input_expression = e.expression;
        auto built = bifurcus::build_diagram(sys, opt);
        const auto& dg = built.diagram;

        std::cout << e.name << ": d" << e.state << "/dt = " << e.expression << "\n"
                  << "  " << dg.branches.size() << " traced, "
                  << dg.constant_branches.size() << " constant, "
                  << dg.bifurcations.size() << " bifurcation point(s)\n";
        write(out_dir / (std::string(e.name) + ".svg"), bifurcus::render::to_svg(dg));
        write(out_dir / (std::string(e.name) + ".csv"), bifurcus::render::to_csv(dg));
        write(out_dir / (std::string(e.name) + ".json"), bifurcus::render::to_json(dg));
    }
    return 0;
}
