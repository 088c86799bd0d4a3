// Python bindings for the core operations: building, growing and evaluating
// width-streamable sine networks, the chunk codec, and basic metrics.
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "snf/metrics.hpp"
#include "snf/net.hpp"
#include "snf/rng.hpp"
#include "snf/stream_codec.hpp"

namespace py = pybind11;
using namespace snf;

namespace {

Matrix to_matrix(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2) throw ArgumentError("expected a 2D array");
    Matrix m(int(arr.shape(0)), int(arr.shape(1)));
    std::copy(arr.data(), arr.data() + m.size(), m.data());
    return m;
}

py::array_t<double> to_array(const Matrix& m) {
    py::array_t<double> arr({m.rows(), m.cols()});
    std::copy(m.data(), m.data() + m.size(), arr.mutable_data());
    return arr;
}

}  // namespace

PYBIND11_MODULE(_snf, mod) {
    mod.doc() = "width-streamable sine-activated neural fields";

    py::register_exception<Error>(mod, "SnfError");

    py::class_<Rng>(mod, "Rng")
        .def(py::init<uint64_t>(), py::arg("seed"))
        .def("uniform", py::overload_cast<double, double>(&Rng::uniform), py::arg("lo"),
             py::arg("hi"));

    py::enum_<InitMode>(mod, "InitMode")
        .value("zero_new_blocks", InitMode::zero_new_blocks)
        .value("siren_new_blocks", InitMode::siren_new_blocks);

    py::class_<StreamableNet>(mod, "StreamableNet")
        .def(py::init([](int in_dim, int out_dim, int depth, int width, double omega0,
                         uint64_t seed) {
                 Rng rng(seed);
                 return StreamableNet(in_dim, out_dim, depth, width, ActivationConfig{omega0},
                                      rng);
             }),
             py::arg("in_dim"), py::arg("out_dim"), py::arg("depth"), py::arg("width"),
             py::arg("omega0") = 30.0, py::arg("seed") = 1)
        .def_property_readonly("in_dim", &StreamableNet::in_dim)
        .def_property_readonly("out_dim", &StreamableNet::out_dim)
        .def_property_readonly("depth", &StreamableNet::depth)
        .def_property_readonly("num_stages", &StreamableNet::num_stages)
        .def_property_readonly("stage_widths", &StreamableNet::stage_widths)
        .def_property_readonly("frozen_stages", &StreamableNet::frozen_stages)
        .def("grow",
             [](StreamableNet& net, int new_width, uint64_t seed, InitMode mode) {
                 Rng rng(seed);
                 net.grow(new_width, rng, mode);
             },
             py::arg("new_width"), py::arg("seed"), py::arg("mode") = InitMode::zero_new_blocks)
        .def("forward",
             [](const StreamableNet& net, const py::array_t<double>& coords, int stage) {
                 return to_array(net.forward(to_matrix(coords), stage));
             },
             py::arg("coords"), py::arg("stage"))
        .def("forward_residual",
             [](const StreamableNet& net, const py::array_t<double>& coords, int stage) {
                 return to_array(net.forward_residual(to_matrix(coords), stage));
             },
             py::arg("coords"), py::arg("stage"))
        .def("param_count", &StreamableNet::param_count, py::arg("stage"));

    mod.def(
        "pack",
        [](const StreamableNet& net, double value_offset, double value_scale, bool f32) {
            const auto bytes = pack(net, StreamMeta{value_offset, value_scale}, f32);
            return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
        },
        py::arg("net"), py::arg("value_offset") = 0.0, py::arg("value_scale") = 1.0,
        py::arg("f32") = false);

    mod.def(
        "decode_prefix",
        [](const py::bytes& data, int k) {
            std::string_view view(data);
            std::vector<uint8_t> bytes(view.begin(), view.end());
            return decode_prefix(bytes, k);
        },
        py::arg("data"), py::arg("k"));

    mod.def(
        "psnr",
        [](const py::array_t<double>& pred, const py::array_t<double>& target, double peak) {
            return psnr01(to_matrix(pred), to_matrix(target), peak);
        },
        py::arg("pred"), py::arg("target"), py::arg("peak") = 1.0);

    mod.def("crc32", [](const py::bytes& data) {
        std::string_view view(data);
        return crc32(reinterpret_cast<const uint8_t*>(view.data()), view.size());
    });
}
