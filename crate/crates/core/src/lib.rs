//! Goodwin growth-cycle model.
//!
//! The crate is `no_std` (with `alloc`) and holds everything that is pure
//! arithmetic: the vector field and its closed-form equilibrium, period and
//! first integral, a Runge-Kutta integrator with drift monitoring, the
//! bundled ten-country parameter table, the factor-of-100 correction
//! pipeline, and a synthetic round-trip estimator for the Phillips curve.
//!
//! File IO and the command-line front end live in the `goodwin` crate.

#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod analysis;
pub mod dataset;
pub mod error;
pub mod estimation;
pub mod model;
pub mod ols;
pub mod simulation;

pub use crate::{
    analysis::{
        correct_scale, error_report, long_run, regenerate_table, reported_average,
        ArdlCoefficients, CellCheck, CellStatus, Column, CountryError, ErrorReport, RegeneratedRow,
        Scale,
    },
    dataset::{
        bundled_dataset, load_dataset, CountryRecord, Discrepancy, Printed, BUNDLED_TABLE,
        COUNTRY_NAMES,
    },
    error::{Error, Result},
    estimation::{
        fit_phillips, fit_structural, generate_series, PhillipsFit, StructuralFit, SyntheticSeries,
    },
    model::{
        equilibrium, first_integral, period, vector_field, EquilibriumPoint, GoodwinParameters,
        State,
    },
    simulation::{measure_period, simulate, IntegratorConfig, Method, Trajectory},
};
