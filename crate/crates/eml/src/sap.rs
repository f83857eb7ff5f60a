//! Self-Adaptation Procedures: a fixed catalog of nine built-in
//! procedures, one per adaptation category, applied to simulated node
//! resources.
//!
//! Each procedure is a deterministic state transform guarded by a
//! feasibility predicate. An infeasible application fails without touching
//! the node. Step magnitudes come from [`SapStepConfig`], loadable from the
//! engine configuration file.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Where a node currently draws power from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PowerSource {
    Primary,
    Ups,
}

/// Printer availability as the simulator tracks it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrinterState {
    Ok,
    OutOfInk,
    Jammed,
    Busy,
}

/// One printer attached to a node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Printer {
    pub name: String,
    pub state: PrinterState,
    #[serde(default)]
    pub assigned_services: BTreeSet<i64>,
}

impl Printer {
    pub fn new(name: impl Into<String>, state: PrinterState) -> Self {
        Printer {
            name: name.into(),
            state,
            assigned_services: BTreeSet::new(),
        }
    }
}

/// Simulated hardware state of one machine. Every `*_allocated` stays at
/// or below its total; `fan_rpm` stays at or below `fan_rpm_max`; the
/// clock multiplier stays within `[1.0, ceiling]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NodeResources {
    /// IPv4 address identifying the node.
    pub node_id: String,
    pub power_draw_watts: f64,
    pub power_source: PowerSource,
    pub ups_available: bool,
    pub clock_multiplier: f64,
    pub cores_total: u32,
    pub cores_allocated: u32,
    pub fan_rpm: u32,
    pub fan_rpm_max: u32,
    pub disk_total_mb: u64,
    pub disk_allocated_mb: u64,
    pub mem_total_mb: u64,
    pub mem_allocated_mb: u64,
    pub bw_total_mbps: u64,
    pub bw_allocated_mbps: u64,
    #[serde(default)]
    pub printers: Vec<Printer>,
}

impl NodeResources {
    /// A mid-sized server with plenty of headroom.
    pub fn new(node_id: impl Into<String>) -> Self {
        NodeResources {
            node_id: node_id.into(),
            power_draw_watts: 250.0,
            power_source: PowerSource::Primary,
            ups_available: true,
            clock_multiplier: 1.0,
            cores_total: 8,
            cores_allocated: 2,
            fan_rpm: 2000,
            fan_rpm_max: 5000,
            disk_total_mb: 8192,
            disk_allocated_mb: 1024,
            mem_total_mb: 4096,
            mem_allocated_mb: 1024,
            bw_total_mbps: 1000,
            bw_allocated_mbps: 100,
            printers: Vec::new(),
        }
    }

    /// Checks the resource bounds; returns the first broken one.
    pub fn check_bounds(&self, clock_ceiling: f64) -> Result<(), String> {
        let checks = [
            (self.cores_allocated as u64 <= self.cores_total as u64, "cores"),
            (self.fan_rpm <= self.fan_rpm_max, "fan rpm"),
            (self.disk_allocated_mb <= self.disk_total_mb, "disk"),
            (self.mem_allocated_mb <= self.mem_total_mb, "memory"),
            (self.bw_allocated_mbps <= self.bw_total_mbps, "bandwidth"),
            (self.clock_multiplier >= 1.0, "clock multiplier floor"),
            (self.clock_multiplier <= clock_ceiling, "clock multiplier ceiling"),
            (self.power_draw_watts >= 0.0, "power draw"),
        ];
        for (ok, what) in checks {
            if !ok {
                return Err(format!("node {}: {what} out of bounds", self.node_id));
            }
        }
        Ok(())
    }

    /// The printer currently serving `service_id`, if any.
    pub fn printer_for(&self, service_id: i64) -> Option<&Printer> {
        self.printers
            .iter()
            .find(|p| p.assigned_services.contains(&service_id))
    }
}

/// The nine adaptation categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SapCategory {
    PowerManagement,
    PowerSupply,
    CpuOverclocking,
    CpuCores,
    Fans,
    DiskSpace,
    MemorySpace,
    NetworkBandwidth,
    Printers,
}

impl SapCategory {
    pub fn display_name(self) -> &'static str {
        match self {
            SapCategory::PowerManagement => "Dynamic Power Management",
            SapCategory::PowerSupply => "Dynamic Power Supply",
            SapCategory::CpuOverclocking => "Dynamic CPU Overclocking",
            SapCategory::CpuCores => "Dynamic CPU Cores Allocation",
            SapCategory::Fans => "Dynamic Fans Allocation",
            SapCategory::DiskSpace => "Dynamic Disk-Space Allocation",
            SapCategory::MemorySpace => "Dynamic Memory-Space Allocation",
            SapCategory::NetworkBandwidth => "Dynamic Network Bandwidth Allocation",
            SapCategory::Printers => "Dynamic Printers Allocation",
        }
    }
}

/// One built-in procedure from the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SapProcedure {
    pub name: &'static str,
    pub category: SapCategory,
}

/// The built-in catalog: one procedure per category. Names are
/// case-sensitive identifiers as written in `executeSAP` calls.
pub const CATALOG: [SapProcedure; 9] = [
    SapProcedure {
        name: "ReducePowerConsumption",
        category: SapCategory::PowerManagement,
    },
    SapProcedure {
        name: "SwitchPowerSource",
        category: SapCategory::PowerSupply,
    },
    SapProcedure {
        name: "OverclockCPU",
        category: SapCategory::CpuOverclocking,
    },
    SapProcedure {
        name: "AllocateExtraCores",
        category: SapCategory::CpuCores,
    },
    SapProcedure {
        name: "IncreaseFanSpeed",
        category: SapCategory::Fans,
    },
    SapProcedure {
        name: "IncreaseDiskQuota",
        category: SapCategory::DiskSpace,
    },
    SapProcedure {
        name: "IncreaseMemory",
        category: SapCategory::MemorySpace,
    },
    SapProcedure {
        name: "IncreaseNetBandwidth",
        category: SapCategory::NetworkBandwidth,
    },
    SapProcedure {
        name: "SwitchPrinter",
        category: SapCategory::Printers,
    },
];

/// Step magnitudes and bounds for the catalog procedures. All fields have
/// defaults, so a config file may set just the ones it cares about.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct SapStepConfig {
    /// Watts removed per `ReducePowerConsumption`.
    pub power_step_watts: f64,
    /// Idle draw floor the power reduction clamps to.
    pub power_floor_watts: f64,
    /// Multiplier applied per `OverclockCPU`.
    pub clock_step_factor: f64,
    /// Upper bound for the clock multiplier.
    pub clock_ceiling: f64,
    /// RPM added per `IncreaseFanSpeed`.
    pub fan_step_rpm: u32,
    /// MB added per `IncreaseDiskQuota`.
    pub disk_step_mb: u64,
    /// MB added per `IncreaseMemory`.
    pub mem_step_mb: u64,
    /// Mbps added per `IncreaseNetBandwidth`.
    pub bw_step_mbps: u64,
}

impl Default for SapStepConfig {
    fn default() -> Self {
        SapStepConfig {
            power_step_watts: 10.0,
            power_floor_watts: 0.0,
            clock_step_factor: 1.1,
            clock_ceiling: 1.5,
            fan_step_rpm: 500,
            disk_step_mb: 256,
            mem_step_mb: 256,
            bw_step_mbps: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SapError {
    #[error("unknown SAP `{0}`")]
    UnknownSap(String),
    #[error("infeasible: {0}")]
    Infeasible(&'static str),
}

/// Case-sensitive catalog lookup.
pub fn lookup_sap(name: &str) -> Result<&'static SapProcedure, SapError> {
    CATALOG
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| SapError::UnknownSap(name.to_string()))
}

/// Apply one procedure to a node on behalf of `service_id`. Returns the
/// transformed node; an `Infeasible` result means the input node is the
/// state that still stands.
pub fn apply_sap(
    proc: &SapProcedure,
    node: &NodeResources,
    service_id: i64,
    cfg: &SapStepConfig,
) -> Result<NodeResources, SapError> {
    let mut next = node.clone();
    match proc.name {
        "ReducePowerConsumption" => {
            if node.power_draw_watts <= cfg.power_floor_watts {
                return Err(SapError::Infeasible("power draw already at the idle floor"));
            }
            next.power_draw_watts =
                (node.power_draw_watts - cfg.power_step_watts).max(cfg.power_floor_watts);
        }
        "SwitchPowerSource" => match node.power_source {
            PowerSource::Primary => {
                if !node.ups_available {
                    return Err(SapError::Infeasible("no UPS available"));
                }
                next.power_source = PowerSource::Ups;
            }
            PowerSource::Ups => next.power_source = PowerSource::Primary,
        },
        "OverclockCPU" => {
            if node.clock_multiplier >= cfg.clock_ceiling {
                return Err(SapError::Infeasible("clock multiplier at ceiling"));
            }
            next.clock_multiplier =
                (node.clock_multiplier * cfg.clock_step_factor).min(cfg.clock_ceiling);
        }
        "AllocateExtraCores" => {
            if node.cores_allocated >= node.cores_total {
                return Err(SapError::Infeasible("all cores allocated"));
            }
            next.cores_allocated = node.cores_allocated + 1;
        }
        "IncreaseFanSpeed" => {
            if node.fan_rpm >= node.fan_rpm_max {
                return Err(SapError::Infeasible("fan at maximum speed"));
            }
            next.fan_rpm = node.fan_rpm.saturating_add(cfg.fan_step_rpm).min(node.fan_rpm_max);
        }
        "IncreaseDiskQuota" => {
            if node.disk_total_mb - node.disk_allocated_mb < cfg.disk_step_mb {
                return Err(SapError::Infeasible("not enough free disk space"));
            }
            next.disk_allocated_mb = node.disk_allocated_mb + cfg.disk_step_mb;
        }
        "IncreaseMemory" => {
            if node.mem_total_mb - node.mem_allocated_mb < cfg.mem_step_mb {
                return Err(SapError::Infeasible("not enough free memory"));
            }
            next.mem_allocated_mb = node.mem_allocated_mb + cfg.mem_step_mb;
        }
        "IncreaseNetBandwidth" => {
            if node.bw_total_mbps - node.bw_allocated_mbps < cfg.bw_step_mbps {
                return Err(SapError::Infeasible("not enough free bandwidth"));
            }
            next.bw_allocated_mbps = node.bw_allocated_mbps + cfg.bw_step_mbps;
        }
        "SwitchPrinter" => {
            let target = node
                .printers
                .iter()
                .position(|p| p.state == PrinterState::Ok)
                .ok_or(SapError::Infeasible("no printer in working state"))?;
            for printer in &mut next.printers {
                printer.assigned_services.remove(&service_id);
            }
            next.printers[target].assigned_services.insert(service_id);
        }
        other => return Err(SapError::UnknownSap(other.to_string())),
    }
    Ok(next)
}
