#pragma once

#include <array>
#include <utility>

// Expression, expected S-expression.
inline constexpr std::array<std::pair<const char*, const char*>, 30> kParserCorpus{{
    {"1", "1"},
    {"x0", "x0"},
    {"2.5e-3", "0.0025000000000000001"},
    {"-x1^2", "(neg (^ x1 2))"},
    {"2^3^2", "(^ 2 (^ 3 2))"},
    {"(2^3)^2", "(^ (^ 2 3) 2)"},
    {"-2^2", "(neg (^ 2 2))"},
    {"x1 - x2 - x3", "(- (- x1 x2) x3)"},
    {"x1 / x2 / x3", "(/ (/ x1 x2) x3)"},
    {"x1 - -x2", "(- x1 (neg x2))"},
    {"2*x0 + 3*x1*x2", "(+ (* 2 x0) (* (* 3 x1) x2))"},
    {"(x0 + x1)*(x2 - x3)", "(* (+ x0 x1) (- x2 x3))"},
    {"sin(x0)^2 + cos(x0)^2", "(+ (^ (sin x0) 2) (^ (cos x0) 2))"},
    {"sqrt(1 + x1^2)", "(sqrt (+ 1 (^ x1 2)))"},
    {"exp(-x0/4)*cos(x1)", "(* (exp (/ (neg x0) 4)) (cos x1))"},
    {"ln(x0)", "(ln x0)"},
    {"tanh(x1) - sinh(x2)/cosh(x2)", "(- (tanh x1) (/ (sinh x2) (cosh x2)))"},
    {"tan(x3)", "(tan x3)"},
    {"x0^-1", "(^ x0 (neg 1))"},
    {"x0^-x1", "(^ x0 (neg x1))"},
    {"2*-x1", "(* 2 (neg x1))"},
    {"1e3*x2", "(* 1000 x2)"},
    {"((x1))", "x1"},
    {"-(x1 + x2)", "(neg (+ x1 x2))"},
    {"x1^2^-1", "(^ x1 (^ 2 (neg 1)))"},
    {"amp*cos(x1)*exp(-x0/4)", "(* (* amp (cos x1)) (exp (/ (neg x0) 4)))"},
    {"a^2*(1 - 2*b)", "(* (^ a 2) (- 1 (* 2 b)))"},
    {"sqrt(x0^4*(1 + 2*0.05*cos(x1)))", "(sqrt (* (^ x0 4) (+ 1 (* (* 2 0.050000000000000003) (cos x1)))))"},
    {"-x0*-x1", "(* (neg x0) (neg x1))"},
    {".5 + 3.", "(+ 0.5 3)"},
}};
