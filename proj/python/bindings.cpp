/*
 * Copyright 2026 The rscoop Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "rscoop/cli.hpp"
#include "rscoop/errors.hpp"
#include "rscoop/report.hpp"

namespace py = pybind11;
using namespace rscoop;

namespace {

std::vector<std::uint32_t> raw(const std::vector<FieldElement>& xs)
{
    std::vector<std::uint32_t> out;
    out.reserve(xs.size());
    for (FieldElement x : xs) {
        out.push_back(x.value);
    }
    return out;
}

std::vector<FieldElement> elements(const TowerField& f, const std::vector<std::uint32_t>& xs)
{
    std::vector<FieldElement> out;
    for (std::uint32_t x : xs) {
        if (x >= f.size()) {
            throw InvalidArgument("element index " + std::to_string(x) + " outside the field");
        }
        out.push_back(FieldElement{x});
    }
    return out;
}

FieldElement element(const TowerField& f, std::uint32_t x) { return elements(f, {x}).front(); }

RSCode make_code(FieldPtr field, std::size_t n, std::size_t k,
                 const std::optional<std::vector<std::uint32_t>>& points)
{
    if (points) {
        return RSCode(field, elements(*field, *points), k);
    }
    return RSCode::prefix(field, n, k);
}

MessageSource source(std::uint64_t seed, std::size_t samples, bool exhaustive)
{
    return exhaustive ? MessageSource::all_messages() : MessageSource::from_seed(seed, samples);
}

std::string repair_report(const RSCode& code, const std::vector<std::size_t>& erased,
                          std::uint64_t seed, std::size_t samples, bool exhaustive)
{
    const RepairPlan plan = plan_repair(code, make_pattern(code, erased));
    const std::vector<Message> msgs = source(seed, samples, exhaustive).generate(code);
    std::vector<RepairRun> runs;
    for (std::size_t i = 0; i < msgs.size(); ++i) {
        const Codeword word = code.encode(msgs[i]);
        Transcript transcript = run_repair(code, word, plan);
        OracleReport oracle = verify_against_oracle(code, word, transcript);
        runs.push_back({i, std::move(transcript), std::move(oracle)});
    }
    return repair_json(code, plan, runs).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Cooperative trace repair of Reed-Solomon erasures.";

    static PyObject* unsupported =
        PyErr_NewException("rscoop._core.UnsupportedPatternError", PyExc_ValueError, nullptr);
    m.attr("UnsupportedPatternError") = py::handle(unsupported);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const UnsupportedPattern& e) {
            PyErr_SetObject(unsupported, py::make_tuple(e.what(), e.l, e.t).ptr());
        } catch (const InvalidArgument& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const AlgebraError& e) {
            PyErr_SetString(PyExc_ArithmeticError, e.what());
        } catch (const PlanError& e) {
            PyErr_SetString(PyExc_RuntimeError, e.what());
        }
    });

    py::class_<TowerField, std::shared_ptr<TowerField>>(m, "Field")
        .def(py::init([](const std::string& spec) {
                 return std::const_pointer_cast<TowerField>(TowerField::from_spec(spec));
             }),
             py::arg("spec"))
        .def_property_readonly("spec", &TowerField::spec)
        .def_property_readonly("p", &TowerField::characteristic)
        .def_property_readonly("s", &TowerField::base_degree)
        .def_property_readonly("t", &TowerField::degree)
        .def_property_readonly("size", &TowerField::size)
        .def_property_readonly("base_size", &TowerField::base_size)
        .def("add", [](const TowerField& f, std::uint32_t a, std::uint32_t b) {
            return f.add(element(f, a), element(f, b)).value;
        })
        .def("mul", [](const TowerField& f, std::uint32_t a, std::uint32_t b) {
            return f.mul(element(f, a), element(f, b)).value;
        })
        .def("inv", [](const TowerField& f, std::uint32_t a) { return f.inv(element(f, a)).value; })
        .def("trace", [](const TowerField& f, std::uint32_t a) { return f.trace(element(f, a)).value; })
        .def("format", [](const TowerField& f, std::uint32_t a) { return f.format(element(f, a)); })
        .def("parse", [](const TowerField& f, const std::string& text) {
            return f.parse_element(text).value;
        })
        .def("info_json", [](const TowerField& f) { return field_info_json(f).dump(); })
        .def("__repr__", [](const TowerField& f) { return "Field('" + f.spec() + "')"; });

    py::class_<RSCode>(m, "Code")
        .def(py::init([](std::shared_ptr<TowerField> field, std::size_t n, std::size_t k,
                         std::optional<std::vector<std::uint32_t>> points) {
                 return make_code(field, n, k, points);
             }),
             py::arg("field"), py::arg("n"), py::arg("k"), py::arg("points") = py::none())
        .def_property_readonly("n", &RSCode::length)
        .def_property_readonly("k", &RSCode::dimension)
        .def_property_readonly("points", [](const RSCode& c) { return raw(c.points()); })
        .def_property_readonly("multipliers", [](const RSCode& c) { return raw(c.multipliers()); })
        .def_property_readonly("repair_feasible", &RSCode::repair_feasible)
        .def("encode", [](const RSCode& c, const std::vector<std::uint32_t>& msg) {
            return raw(c.encode(Message{elements(c.field(), msg)}).symbols);
        });

    m.def("plan_json",
          [](const RSCode& code, const std::vector<std::size_t>& erased) {
              return plan_json(code, plan_repair(code, make_pattern(code, erased))).dump();
          },
          py::arg("code"), py::arg("erased"));
    m.def("repair_json", &repair_report, py::arg("code"), py::arg("erased"), py::arg("seed") = 1,
          py::arg("samples") = 1, py::arg("exhaustive") = false);
    m.def("sweep_json",
          [](const RSCode& code, std::size_t r, std::uint64_t seed, std::size_t samples,
             bool exhaustive, std::size_t threads) {
              SweepReport report;
              {
                  py::gil_scoped_release release;
                  report = sweep(code, r, source(seed, samples, exhaustive), threads);
              }
              return sweep_json(code, report).dump();
          },
          py::arg("code"), py::arg("r"), py::arg("seed") = 1, py::arg("samples") = 100,
          py::arg("exhaustive") = false, py::arg("threads") = 0);
    m.def("cli",
          [](const std::vector<std::string>& args) {
              std::ostringstream out, err;
              const int code = run_cli(args, out, err);
              return py::make_tuple(code, out.str(), err.str());
          },
          py::arg("args"));
}
