// Prints the markdown construction trace for one system, by default the
// offset cubic dx/dt = c + (1 + 2c)x - x^3.  Pass expression, state and
// parameter names to walk through something else:
//
//   trace_walkthrough "a + x^2" x a

#include <bifurcus/pipeline.hpp>
#include <bifurcus/render.hpp>

#include <iostream>

int main(int argc, char** argv) {
    std::string expression = argc > 3 ? argv[1] : "c + (1 + 2*c)*x - x^3";
    std::string state = argc > 3 ? argv[2] : "x";
    std::string param = argc > 3 ? argv[3] : "c";

    try {
        auto sys = bifurcus::expr::parse_system(expression, state, param);
        bifurcus::BuildOptions opt;
        opt.input_expression = expression;
        auto built = bifurcus::build_diagram(sys, opt);
        std::cout << bifurcus::render::step_trace(sys, built.decomposition,
                                                  built.poles_zeros, built.diagram);
    } catch (const std::exception& e) {
        std::cerr << "trace_walkthrough: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
