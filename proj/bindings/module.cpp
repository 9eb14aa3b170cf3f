#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "slicefix/correct.hpp"
#include "slicefix/orient.hpp"
#include "slicefix/raster.hpp"
#include "slicefix/skeleton.hpp"
#include "slicefix/volume.hpp"

namespace py = pybind11;
using namespace slicefix;

namespace {

BinaryRaster raster_from_numpy(py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast> arr,
                               double pitch, double origin_x, double origin_y) {
    if (arr.ndim() != 2) throw std::invalid_argument("expected a 2D array");
    const int h = static_cast<int>(arr.shape(0));
    const int w = static_cast<int>(arr.shape(1));
    BinaryRaster r(w, h, pitch, origin_x, origin_y);
    auto view = arr.unchecked<2>();
    // numpy row 0 maps to raster row 0 (y = 0)
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) r.set(x, y, view(y, x) != 0);
    return r;
}

py::array_t<std::uint8_t> raster_to_numpy(const BinaryRaster& r) {
    py::array_t<std::uint8_t> arr({r.height(), r.width()});
    auto view = arr.mutable_unchecked<2>();
    for (int y = 0; y < r.height(); ++y)
        for (int x = 0; x < r.width(); ++x) view(y, x) = r.get(x, y) ? 1 : 0;
    return arr;
}

}  // namespace

PYBIND11_MODULE(_slicefix, m) {
    m.doc() = "Slice-based printability correction for additive manufacturing";

    py::class_<BinaryRaster>(m, "BinaryRaster")
        .def(py::init<int, int, double, double, double>(), py::arg("width"), py::arg("height"),
             py::arg("pitch"), py::arg("origin_x") = 0.0, py::arg("origin_y") = 0.0)
        .def_static("from_numpy", &raster_from_numpy, py::arg("array"), py::arg("pitch") = 1.0,
                    py::arg("origin_x") = 0.0, py::arg("origin_y") = 0.0)
        .def("to_numpy", &raster_to_numpy)
        .def_property_readonly("width", &BinaryRaster::width)
        .def_property_readonly("height", &BinaryRaster::height)
        .def_property_readonly("pitch", &BinaryRaster::pitch)
        .def("get", &BinaryRaster::get)
        .def("set", &BinaryRaster::set)
        .def("foreground_count", &BinaryRaster::foreground_count)
        .def("__eq__", [](const BinaryRaster& a, const BinaryRaster& b) { return a == b; });

    py::class_<StructuringElement>(m, "StructuringElement")
        .def_static("disk", &StructuringElement::disk, py::arg("radius_px"),
                    py::arg("diameter_mm") = 0.0)
        .def_static("from_diameter", &StructuringElement::from_diameter, py::arg("diameter_mm"),
                    py::arg("pitch_mm"))
        .def_readonly("diameter_mm", &StructuringElement::diameter_mm)
        .def_readonly("radius_px", &StructuringElement::radius_px)
        .def_readonly("offsets", &StructuringElement::offsets);

    m.def("erode", &erode);
    m.def("dilate", &dilate);
    m.def("open", &open);
    m.def("euler_number", &euler_number);
    m.def("connected_component_count",
          [](const BinaryRaster& s, int conn) { return connected_components(s, conn).count; },
          py::arg("raster"), py::arg("connectivity") = 8);
    m.def("thin_pass", &thin_pass);
    m.def("max_element_diameter",
          [](const BinaryRaster& s) { return max_element_diameter(s); });

    py::class_<MesoSkeletonResult>(m, "MesoSkeletonResult")
        .def_readonly("skeleton", &MesoSkeletonResult::skeleton)
        .def_readonly("erosion", &MesoSkeletonResult::erosion)
        .def_readonly("iterations", &MesoSkeletonResult::iterations)
        .def_readonly("converged", &MesoSkeletonResult::converged);

    m.def(
        "meso_skeleton",
        [](const BinaryRaster& s, const StructuringElement& f, bool spur_removal) {
            MesoSkeletonOptions opts;
            opts.spur_removal = spur_removal;
            return meso_skeleton(s, f, opts);
        },
        py::arg("slice"), py::arg("element"), py::arg("spur_removal") = true);

    py::class_<TriangleMesh>(m, "TriangleMesh")
        .def(py::init<>())
        .def_readwrite("vertices", &TriangleMesh::vertices)
        .def_readwrite("triangles", &TriangleMesh::triangles)
        .def("bbox_min", &TriangleMesh::bbox_min)
        .def("bbox_max", &TriangleMesh::bbox_max)
        .def("open_edge_count", &TriangleMesh::open_edge_count);

    py::class_<Orientation>(m, "Orientation")
        .def(py::init<double, double>(), py::arg("theta1"), py::arg("theta2"))
        .def_readonly("theta1", &Orientation::theta1)
        .def_readonly("theta2", &Orientation::theta2);

    m.def("load_mesh", &load_mesh);
    m.def("save_mesh", py::overload_cast<const TriangleMesh&, const std::string&>(&save_mesh));
    m.def("rotate_mesh", &rotate_mesh);

    py::class_<SliceStack>(m, "SliceStack")
        .def_readonly("slices", &SliceStack::slices)
        .def_readonly("layer_height", &SliceStack::layer_height)
        .def_readonly("z_origin", &SliceStack::z_origin)
        .def("foreground_count", &SliceStack::foreground_count);

    m.def(
        "voxelize",
        [](const TriangleMesh& mesh, double layer_height, double pitch, int padding) {
            return voxelize(mesh, layer_height, pitch, padding);
        },
        py::arg("mesh"), py::arg("layer_height"), py::arg("pitch"), py::arg("padding") = 1);
    m.def("extract_surface", &extract_surface);

    m.def(
        "correct_model",
        [](const SliceStack& v, const StructuringElement& f, bool spur_removal, int threads) {
            CorrectOptions opts;
            opts.spur_removal = spur_removal;
            opts.threads = threads;
            CorrectionResult r = correct_model(v, f, opts);
            py::dict report;
            report["objective"] = r.report.objective;
            report["added_vox"] = r.report.total_added;
            report["removed_vox"] = r.report.total_removed;
            report["json"] = r.report.to_json();
            return py::make_tuple(r.corrected, report);
        },
        py::arg("stack"), py::arg("element"), py::arg("spur_removal") = true,
        py::arg("threads") = 1);

    py::class_<ObjectiveParams>(m, "ObjectiveParams")
        .def(py::init<>())
        .def_readwrite("min_feature_diameter_mm", &ObjectiveParams::min_feature_diameter_mm)
        .def_readwrite("layer_height_mm", &ObjectiveParams::layer_height_mm)
        .def_readwrite("pitch_mm", &ObjectiveParams::pitch_mm)
        .def_readwrite("threads", &ObjectiveParams::threads);

    m.def("evaluate_objective", &evaluate_objective);

    py::class_<AnnealConfig>(m, "AnnealConfig")
        .def(py::init<>())
        .def_readwrite("initial_temperature", &AnnealConfig::initial_temperature)
        .def_readwrite("cooling_rate", &AnnealConfig::cooling_rate)
        .def_readwrite("max_iterations", &AnnealConfig::max_iterations)
        .def_readwrite("proposal_scale", &AnnealConfig::proposal_scale)
        .def_readwrite("rng_seed", &AnnealConfig::rng_seed)
        .def_readwrite("initial", &AnnealConfig::initial)
        .def_readwrite("eval", &AnnealConfig::eval);

    py::class_<AnnealRecord>(m, "AnnealRecord")
        .def_readonly("iteration", &AnnealRecord::iteration)
        .def_readonly("theta1", &AnnealRecord::theta1)
        .def_readonly("theta2", &AnnealRecord::theta2)
        .def_readonly("objective", &AnnealRecord::objective)
        .def_readonly("temperature", &AnnealRecord::temperature)
        .def_readonly("accepted", &AnnealRecord::accepted);

    py::class_<AnnealTrace>(m, "AnnealTrace")
        .def_readonly("records", &AnnealTrace::records)
        .def_readonly("best", &AnnealTrace::best)
        .def_readonly("best_objective", &AnnealTrace::best_objective)
        .def_readonly("initial_objective", &AnnealTrace::initial_objective);

    m.def("anneal", py::overload_cast<const TriangleMesh&, const AnnealConfig&>(&anneal));
}
