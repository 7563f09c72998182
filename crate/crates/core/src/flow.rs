//! Deadline feasibility via bipartite max-flow, and schedule construction.
//!
//! A completion vector `C` is valid iff the network
//! `source -> job j (cap p_j) -> interval i (cap l_i, only if t_i <= C_j) -> sink (cap m*l_i)`
//! carries a flow of value `sum(p_j)`. The per-interval flow `y[j][i]` is then
//! packed onto machines McNaughton-style inside each interval.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{GspError, Result};
use crate::instance::{Instance, Time, FORMAT_VERSION};
use crate::timeline::Timeline;

/// One completion time per job.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CompletionVector(pub Vec<Time>);

impl CompletionVector {
    pub fn as_slice(&self) -> &[Time] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Each entry rounded up to the next breakpoint of `timeline`.
    pub fn rounded_to(&self, timeline: &Timeline) -> CompletionVector {
        CompletionVector(self.0.iter().map(|&c| timeline.round_up(c)).collect())
    }
}

impl From<Vec<Time>> for CompletionVector {
    fn from(v: Vec<Time>) -> Self {
        CompletionVector(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Node {
    Source,
    Job(usize),
    Interval(usize),
    Sink,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    pub from: Node,
    pub to: Node,
    pub cap: u64,
}

#[derive(Debug, Clone)]
pub struct FlowNet {
    pub n_jobs: usize,
    pub n_intervals: usize,
    pub arcs: Vec<Arc>,
}

impl FlowNet {
    fn index(&self, node: Node) -> usize {
        match node {
            Node::Source => 0,
            Node::Job(j) => 1 + j,
            Node::Interval(i) => 1 + self.n_jobs + i,
            Node::Sink => 1 + self.n_jobs + self.n_intervals,
        }
    }

    pub fn node_count(&self) -> usize {
        self.n_jobs + self.n_intervals + 2
    }

    /// Capacity of the arc `from -> to`, if present.
    pub fn capacity(&self, from: Node, to: Node) -> Option<u64> {
        self.arcs
            .iter()
            .find(|a| a.from == from && a.to == to)
            .map(|a| a.cap)
    }
}

#[derive(Debug, Clone)]
pub struct MaxFlow {
    pub value: u64,
    /// Flow on each arc of the network, aligned with `FlowNet::arcs`.
    pub arc_flow: Vec<u64>,
}

/// Builds the feasibility network. Completion times are first rounded up to
/// the timeline's breakpoints.
pub fn build_flow_graph(
    instance: &Instance,
    timeline: &Timeline,
    completions: &CompletionVector,
) -> Result<FlowNet> {
    check_completions(instance, timeline, completions)?;
    let rounded = completions.rounded_to(timeline);
    let n = instance.n();
    let k = timeline.len();
    let mut arcs = Vec::with_capacity(n + k + n * k);
    for job in instance.jobs() {
        arcs.push(Arc {
            from: Node::Source,
            to: Node::Job(job.id),
            cap: job.p as u64,
        });
    }
    for (j, &c) in rounded.0.iter().enumerate() {
        for i in 0..k {
            if timeline.end(i) > c {
                break;
            }
            arcs.push(Arc {
                from: Node::Job(j),
                to: Node::Interval(i),
                cap: timeline.length(i) as u64,
            });
        }
    }
    let m = instance.machines() as u64;
    for i in 0..k {
        arcs.push(Arc {
            from: Node::Interval(i),
            to: Node::Sink,
            cap: m * timeline.length(i) as u64,
        });
    }
    Ok(FlowNet {
        n_jobs: n,
        n_intervals: k,
        arcs,
    })
}

fn check_completions(
    instance: &Instance,
    timeline: &Timeline,
    completions: &CompletionVector,
) -> Result<()> {
    if completions.len() != instance.n() {
        return Err(GspError::InvalidCompletions(format!(
            "expected {} completion times, got {}",
            instance.n(),
            completions.len()
        )));
    }
    for (job, &c) in instance.jobs().iter().zip(&completions.0) {
        if c < job.p {
            return Err(GspError::InvalidCompletions(format!(
                "job {} completes at {c} before its processing time {}",
                job.id, job.p
            )));
        }
        if c > timeline.horizon() {
            return Err(GspError::InvalidCompletions(format!(
                "job {} completes at {c} after the horizon {}",
                job.id,
                timeline.horizon()
            )));
        }
    }
    Ok(())
}

/// Dinic's algorithm on the residual graph of `net`.
pub fn max_flow(net: &FlowNet) -> MaxFlow {
    let mut dinic = Dinic::new(net.node_count());
    let handles: Vec<usize> = net
        .arcs
        .iter()
        .map(|a| dinic.add_edge(net.index(a.from), net.index(a.to), a.cap))
        .collect();
    let value = dinic.run(net.index(Node::Source), net.index(Node::Sink));
    let arc_flow = handles.iter().map(|&h| dinic.flow_on(h)).collect();
    MaxFlow { value, arc_flow }
}

struct Edge {
    to: usize,
    cap: u64,
    orig: u64,
}

struct Dinic {
    adj: Vec<Vec<usize>>,
    edges: Vec<Edge>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic {
            adj: vec![Vec::new(); n],
            edges: Vec::new(),
            level: vec![-1; n],
            iter: vec![0; n],
        }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: u64) -> usize {
        let id = self.edges.len();
        self.edges.push(Edge { to, cap, orig: cap });
        self.adj[from].push(id);
        self.edges.push(Edge {
            to: from,
            cap: 0,
            orig: 0,
        });
        self.adj[to].push(id + 1);
        id
    }

    fn flow_on(&self, id: usize) -> u64 {
        self.edges[id].orig - self.edges[id].cap
    }

    fn bfs(&mut self, s: usize) {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.adj[v] {
                let Edge { to, cap, .. } = self.edges[e];
                if cap > 0 && self.level[to] < 0 {
                    self.level[to] = self.level[v] + 1;
                    queue.push_back(to);
                }
            }
        }
    }

    fn dfs(&mut self, v: usize, t: usize, limit: u64) -> u64 {
        if v == t {
            return limit;
        }
        while self.iter[v] < self.adj[v].len() {
            let e = self.adj[v][self.iter[v]];
            let Edge { to, cap, .. } = self.edges[e];
            if cap > 0 && self.level[v] < self.level[to] {
                let pushed = self.dfs(to, t, limit.min(cap));
                if pushed > 0 {
                    self.edges[e].cap -= pushed;
                    self.edges[e ^ 1].cap += pushed;
                    return pushed;
                }
            }
            self.iter[v] += 1;
        }
        0
    }

    fn run(&mut self, s: usize, t: usize) -> u64 {
        let mut total = 0;
        loop {
            self.bfs(s);
            if self.level[t] < 0 {
                return total;
            }
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let pushed = self.dfs(s, t, u64::MAX);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
    }
}

/// Builds the network and computes a maximum flow.
pub fn solve_flow(
    instance: &Instance,
    timeline: &Timeline,
    completions: &CompletionVector,
) -> Result<(FlowNet, MaxFlow)> {
    let net = build_flow_graph(instance, timeline, completions)?;
    let flow = max_flow(&net);
    Ok((net, flow))
}

/// True iff a schedule finishing every job by its completion time exists.
/// Completion times before `p_j` are never valid; times past the horizon
/// are treated as the horizon.
pub fn is_valid(instance: &Instance, timeline: &Timeline, completions: &CompletionVector) -> bool {
    let clamped = CompletionVector(
        completions
            .0
            .iter()
            .map(|&c| c.min(timeline.horizon()))
            .collect(),
    );
    match solve_flow(instance, timeline, &clamped) {
        Ok((_, flow)) => flow.value == instance.total_work() as u64,
        Err(_) => false,
    }
}

/// Per-interval machine plan: `machines[k]` lists `(job, units)` laid out
/// back to back from the interval start on machine `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalPlan {
    pub t_start: Time,
    pub t_end: Time,
    pub machines: Vec<Vec<(usize, u64)>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub intervals: Vec<IntervalPlan>,
    /// `alloc[j][i]`: units of job `j` processed in interval `i`.
    pub alloc: Vec<Vec<u64>>,
}

impl Schedule {
    /// Time at which each job's last unit finishes.
    pub fn completion_times(&self) -> Vec<Time> {
        let mut done = vec![0; self.alloc.len()];
        for plan in &self.intervals {
            for machine in &plan.machines {
                let mut offset = plan.t_start;
                for &(job, units) in machine {
                    offset += units as usize;
                    if units > 0 && job < done.len() {
                        done[job] = done[job].max(offset);
                    }
                }
            }
        }
        done
    }

    pub fn to_json(&self) -> String {
        let raw = ScheduleJson {
            format: FORMAT_VERSION,
            intervals: self
                .intervals
                .iter()
                .map(|p| IntervalJson {
                    t_end: p.t_end,
                    machines: p.machines.clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("schedule serializes")
    }

    /// Parses a schedule for an instance with `n_jobs` jobs; the allocation
    /// matrix is rebuilt from the machine plans.
    pub fn from_json(text: &str, n_jobs: usize) -> Result<Self> {
        let raw: ScheduleJson =
            serde_json::from_str(text).map_err(|e| GspError::Parse(e.to_string()))?;
        if raw.format != FORMAT_VERSION {
            return Err(GspError::Parse(format!(
                "unsupported format version {}",
                raw.format
            )));
        }
        let k = raw.intervals.len();
        let mut alloc = vec![vec![0u64; k]; n_jobs];
        let mut intervals = Vec::with_capacity(k);
        let mut t_start = 0;
        for (i, interval) in raw.intervals.into_iter().enumerate() {
            for machine in &interval.machines {
                for &(job, units) in machine {
                    if job >= n_jobs {
                        return Err(GspError::Parse(format!("unknown job id {job}")));
                    }
                    alloc[job][i] += units;
                }
            }
            intervals.push(IntervalPlan {
                t_start,
                t_end: interval.t_end,
                machines: interval.machines,
            });
            t_start = interval.t_end;
        }
        Ok(Schedule { intervals, alloc })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleJson {
    #[serde(default = "default_format")]
    format: u32,
    intervals: Vec<IntervalJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntervalJson {
    t_end: Time,
    machines: Vec<Vec<(usize, u64)>>,
}

fn default_format() -> u32 {
    FORMAT_VERSION
}

/// Per-job, per-interval flow `y[j][i]` read off a max flow.
pub fn allocation(net: &FlowNet, flow: &MaxFlow) -> Vec<Vec<u64>> {
    let mut y = vec![vec![0u64; net.n_intervals]; net.n_jobs];
    for (arc, &f) in net.arcs.iter().zip(&flow.arc_flow) {
        if let (Node::Job(j), Node::Interval(i)) = (arc.from, arc.to) {
            y[j][i] += f;
        }
    }
    y
}

/// Packs a full-value flow into machines. Inside each interval, jobs are taken
/// in id order and poured onto machines in id order; a job that overflows one
/// machine continues at the start of the next. Since `y[j][i] <= l_i` the two
/// pieces never overlap in time.
pub fn extract_schedule(
    instance: &Instance,
    timeline: &Timeline,
    completions: &CompletionVector,
    net: &FlowNet,
    flow: &MaxFlow,
) -> Result<Schedule> {
    let total = instance.total_work() as u64;
    if flow.value < total {
        return Err(GspError::InconsistentFlow(format!(
            "flow value {} is below total work {total}",
            flow.value
        )));
    }
    if completions.len() != instance.n() || net.n_intervals != timeline.len() {
        return Err(GspError::InconsistentFlow(
            "network does not match instance and timeline".into(),
        ));
    }
    let y = allocation(net, flow);
    let m = instance.machines();
    let mut intervals = Vec::with_capacity(timeline.len());
    for i in 0..timeline.len() {
        let len = timeline.length(i) as u64;
        let mut machines: Vec<Vec<(usize, u64)>> = vec![Vec::new(); m];
        let mut machine = 0;
        let mut used = 0u64;
        for (j, row) in y.iter().enumerate() {
            let mut remaining = row[i];
            while remaining > 0 {
                if machine >= m {
                    return Err(GspError::InconsistentFlow(format!(
                        "interval {i} is over capacity"
                    )));
                }
                let take = remaining.min(len - used);
                machines[machine].push((j, take));
                used += take;
                remaining -= take;
                if used == len {
                    machine += 1;
                    used = 0;
                }
            }
        }
        intervals.push(IntervalPlan {
            t_start: timeline.start(i),
            t_end: timeline.end(i),
            machines,
        });
    }
    Ok(Schedule { intervals, alloc: y })
}

/// Runs the flow and extracts a schedule, or fails if `completions` is not valid.
pub fn schedule_for(
    instance: &Instance,
    timeline: &Timeline,
    completions: &CompletionVector,
) -> Result<Schedule> {
    let (net, flow) = solve_flow(instance, timeline, completions)?;
    extract_schedule(instance, timeline, completions, &net, &flow)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Shape(String),
    Deadline { job: usize, interval: usize },
    JobRate { job: usize, interval: usize },
    Capacity { interval: usize },
    Work { job: usize, got: u64, want: u64 },
    AllocationMismatch { job: usize, interval: usize },
    MachineOverload { machine: usize, interval: usize },
    Simultaneity { job: usize, interval: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape(msg) => write!(f, "shape mismatch: {msg}"),
            Violation::Deadline { job, interval } => {
                write!(f, "deadline violation: job {job} runs in interval {interval}")
            }
            Violation::JobRate { job, interval } => write!(
                f,
                "rate violation: job {job} exceeds the interval length in interval {interval}"
            ),
            Violation::Capacity { interval } => {
                write!(f, "capacity violation: interval {interval} exceeds m * length")
            }
            Violation::Work { job, got, want } => {
                write!(f, "work violation: job {job} receives {got} of {want} units")
            }
            Violation::AllocationMismatch { job, interval } => write!(
                f,
                "allocation mismatch: machine plan disagrees for job {job} in interval {interval}"
            ),
            Violation::MachineOverload { machine, interval } => {
                write!(f, "machine overload: machine {machine} in interval {interval}")
            }
            Violation::Simultaneity { job, interval } => write!(
                f,
                "simultaneity violation: job {job} runs on two machines at once in interval {interval}"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violation: Option<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violation.is_none()
    }
}

/// Independent checker for every schedule invariant. Reports the first
/// violation found, checking allocation-level invariants before machine plans.
pub fn validate_schedule(
    instance: &Instance,
    timeline: &Timeline,
    completions: &CompletionVector,
    schedule: &Schedule,
) -> ValidationReport {
    let violation = find_violation(instance, timeline, completions, schedule);
    ValidationReport { violation }
}

fn find_violation(
    instance: &Instance,
    timeline: &Timeline,
    completions: &CompletionVector,
    schedule: &Schedule,
) -> Option<Violation> {
    let n = instance.n();
    let k = timeline.len();
    let m = instance.machines();
    if completions.len() != n {
        return Some(Violation::Shape(format!(
            "{} completion times for {n} jobs",
            completions.len()
        )));
    }
    if schedule.alloc.len() != n || schedule.alloc.iter().any(|row| row.len() != k) {
        return Some(Violation::Shape("allocation is not jobs x intervals".into()));
    }
    if schedule.intervals.len() != k {
        return Some(Violation::Shape(format!(
            "{} intervals for a {k}-interval timeline",
            schedule.intervals.len()
        )));
    }
    for (i, plan) in schedule.intervals.iter().enumerate() {
        if plan.t_start != timeline.start(i) || plan.t_end != timeline.end(i) {
            return Some(Violation::Shape(format!("interval {i} bounds differ from timeline")));
        }
        if plan.machines.len() != m {
            return Some(Violation::Shape(format!(
                "interval {i} lists {} machines, instance has {m}",
                plan.machines.len()
            )));
        }
    }

    let deadlines = completions.rounded_to(timeline);
    for j in 0..n {
        for i in 0..k {
            if schedule.alloc[j][i] > 0 && timeline.end(i) > deadlines.0[j] {
                return Some(Violation::Deadline { job: j, interval: i });
            }
        }
    }
    for j in 0..n {
        for i in 0..k {
            if schedule.alloc[j][i] > timeline.length(i) as u64 {
                return Some(Violation::JobRate { job: j, interval: i });
            }
        }
    }
    for i in 0..k {
        let load: u64 = schedule.alloc.iter().map(|row| row[i]).sum();
        if load > (m * timeline.length(i)) as u64 {
            return Some(Violation::Capacity { interval: i });
        }
    }
    for (j, job) in instance.jobs().iter().enumerate() {
        let got: u64 = schedule.alloc[j].iter().sum();
        if got != job.p as u64 {
            return Some(Violation::Work {
                job: j,
                got,
                want: job.p as u64,
            });
        }
    }

    for (i, plan) in schedule.intervals.iter().enumerate() {
        let len = timeline.length(i) as u64;
        let mut per_job = vec![0u64; n];
        // busy segments [start, end) per job, relative to the interval start
        let mut segments: Vec<Vec<(u64, u64)>> = vec![Vec::new(); n];
        for (machine, list) in plan.machines.iter().enumerate() {
            let mut offset = 0u64;
            for &(job, units) in list {
                if job >= n {
                    return Some(Violation::Shape(format!("unknown job id {job}")));
                }
                per_job[job] += units;
                if units > 0 {
                    segments[job].push((offset, offset + units));
                }
                offset += units;
            }
            if offset > len {
                return Some(Violation::MachineOverload {
                    machine,
                    interval: i,
                });
            }
        }
        for (j, &got) in per_job.iter().enumerate() {
            if got != schedule.alloc[j][i] {
                return Some(Violation::AllocationMismatch { job: j, interval: i });
            }
        }
        for (j, segs) in segments.iter_mut().enumerate() {
            segs.sort_unstable();
            if segs.windows(2).any(|w| w[1].0 < w[0].1) {
                return Some(Violation::Simultaneity { job: j, interval: i });
            }
        }
    }
    None
}
