macro_rules! example {
    ($module:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }
    };
}

example!(posets, "posets.rs");
example!(lattices, "lattices.rs");
example!(row_engine, "row_engine.rs");
example!(connection_maps, "connection_maps.rs");
example!(scaffolding, "scaffolding.rs");
example!(modular_pipeline, "modular_pipeline.rs");
example!(free_lattices, "free_lattices.rs");
example!(custom_variety, "custom_variety.rs");
example!(cli_batch, "cli_batch.rs");

#[test]
fn posets_example_runs() {
    posets::run_example().expect("posets example");
}

#[test]
fn lattices_example_runs() {
    lattices::run_example().expect("lattices example");
}

#[test]
fn row_engine_example_runs() {
    row_engine::run_example().expect("row engine example");
}

#[test]
fn connection_maps_example_runs() {
    connection_maps::run_example().expect("connection maps example");
}

#[test]
fn scaffolding_example_runs() {
    scaffolding::run_example().expect("scaffolding example");
}

#[test]
fn modular_pipeline_example_runs() {
    modular_pipeline::run_example().expect("pipeline example");
}

#[test]
fn free_lattices_example_runs() {
    free_lattices::run_example().expect("free lattices example");
}

#[test]
fn custom_variety_example_runs() {
    custom_variety::run_example().expect("custom variety example");
}

#[test]
fn cli_batch_example_runs() {
    cli_batch::run_example().expect("cli example");
}
