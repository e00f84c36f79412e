//! One function per subcommand. Cells are computed in parallel on the
//! current rayon pool; reports are assembled in a fixed order.

use std::sync::Arc;

use magpath::chains::{face_matrix, Chain, Tuple};
use magpath::digraph::{cartesian_product, homotopy_along_chain, interval, one_step_homotopic, DigraphMap};
use magpath::homology::{GroupShape, HomologyEngine};
use magpath::spectral::{build_filtered_complex, same_lattice, FilteredComplex, Page};
use magpath::{Digraph, ExtInt, Result};
use rayon::prelude::*;

use crate::maps::parse_maps;
use crate::report::{digest, Bounds, Cell, Report, Verdict};
use crate::{CliError, Command};

pub fn dispatch(command: &Command, g: Arc<Digraph>) -> std::result::Result<Report, CliError> {
    match *command {
        Command::Mh { lmax, kmax } => Ok(cmd_mh(g, lmax, kmax)?),
        Command::Dmh { lmax, kmax } => Ok(cmd_dmh(g, lmax, kmax)?),
        Command::Path { kmax } => Ok(cmd_path(g, kmax)?),
        Command::Spectral { nmax, rmax } => Ok(cmd_spectral(g, nmax, rmax)?),
        Command::Diagonal { lmax, kmax } => Ok(cmd_diagonal(g, lmax, kmax)?),
        Command::Homotopy { ref maps } => {
            let text = std::fs::read_to_string(maps)
                .map_err(|e| CliError::Usage(format!("cannot read `{}`: {e}", maps.display())))?;
            let assignments = parse_maps(&text, &g)?;
            Ok(cmd_homotopy(g, &assignments)?)
        }
        Command::Verify { lmax, kmax, nmax } => Ok(cmd_verify(g, lmax, kmax, nmax)?),
    }
}

fn input_digest(g: &Digraph) -> String {
    digest(&g.to_edge_list())
}

fn grid(lmax: i64, kmax: i64) -> Vec<(i64, i64)> {
    (-1..=lmax).flat_map(|l| (-1..=kmax).map(move |k| (l, k))).collect()
}

fn box_bounds(lmax: i64, kmax: i64) -> Bounds {
    Bounds {
        lmax: Some(lmax),
        kmax: Some(kmax),
        ..Bounds::default()
    }
}

pub fn cmd_mh(g: Arc<Digraph>, lmax: i64, kmax: i64) -> Result<Report> {
    let h = HomologyEngine::new(g.clone());
    let cells = grid(lmax, kmax)
        .into_par_iter()
        .map(|(l, k)| Ok(Cell::new("MH", None, vec![l, k], &h.magnitude_homology(l, k)?.shape())))
        .collect::<Result<Vec<_>>>()?;
    Ok(Report::new("mh", input_digest(&g), box_bounds(lmax, kmax), cells, vec![]))
}

pub fn cmd_dmh(g: Arc<Digraph>, lmax: i64, kmax: i64) -> Result<Report> {
    let h = HomologyEngine::new(g.clone());
    let cells = grid(lmax, kmax)
        .into_par_iter()
        .map(|(l, k)| Ok(Cell::new("dMH", None, vec![l, k], &h.dmh(l, k)?.shape())))
        .collect::<Result<Vec<_>>>()?;
    Ok(Report::new("dmh", input_digest(&g), box_bounds(lmax, kmax), cells, vec![]))
}

pub fn cmd_path(g: Arc<Digraph>, kmax: i64) -> Result<Report> {
    let h = HomologyEngine::new(g.clone());
    let cells = (-1..=kmax)
        .into_par_iter()
        .map(|k| Ok(Cell::new("H~", None, vec![k], &h.reduced_path_homology(k)?.shape())))
        .collect::<Result<Vec<_>>>()?;
    let bounds = Bounds {
        kmax: Some(kmax),
        ..Bounds::default()
    };
    Ok(Report::new("path", input_digest(&g), bounds, cells, vec![]))
}

fn page_name(r: Page) -> String {
    r.to_string()
}

pub fn cmd_spectral(g: Arc<Digraph>, nmax: i64, rmax: i64) -> Result<Report> {
    let fc = build_filtered_complex(g.clone(), nmax)?;
    let pages: Vec<Page> = (0..=rmax).map(Page::Finite).chain([Page::Infinity]).collect();
    let cap = fc.level_cap();
    let positions: Vec<(Page, i64, i64)> = pages
        .iter()
        .flat_map(|&r| (-1..=nmax).flat_map(move |n| (-1..=cap).map(move |l| (r, l, n))))
        .collect();
    let cells = positions
        .into_par_iter()
        .map(|(r, l, n)| Ok(Cell::new("E", Some(page_name(r)), vec![l, n], &fc.page_cell(l, r, n)?.shape())))
        .collect::<Result<Vec<_>>>()?;

    let nonzero_limit = cells
        .iter()
        .find(|c| c.page.as_deref() == Some("inf") && c.generator_count > 0)
        .map(|c| format!("E^inf at (l, n) = ({}, {}) is {}", c.indices[0], c.indices[1], c.describe()));
    let stable = (-1..=nmax)
        .flat_map(|n| (-1..=cap).map(move |l| (l, n)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(l, n)| fc.stabilized_page(l, n).map(|(_, r)| r))
        .collect::<Result<Vec<_>>>()?;
    let last = stable.into_iter().max().unwrap_or(0);
    let verdicts = vec![
        Verdict::check("limit page vanishes", nonzero_limit),
        Verdict::info(
            "every cell has stabilized by the last printed page",
            last <= rmax,
            Some(format!("all cells are stable from page {last} on")),
        ),
    ];
    let bounds = Bounds {
        nmax: Some(nmax),
        rmax: Some(rmax),
        ..Bounds::default()
    };
    Ok(Report::new("spectral", input_digest(&g), bounds, cells, verdicts))
}

fn describe_cell(name: &str, l: i64, k: i64, s: &GroupShape) -> String {
    format!("{name}^{l}_{k} = {s}")
}

pub fn cmd_diagonal(g: Arc<Digraph>, lmax: i64, kmax: i64) -> Result<Report> {
    let h = HomologyEngine::new(g.clone());
    // Warm the cache in parallel; the report itself is assembled in order.
    grid(lmax, kmax)
        .into_par_iter()
        .try_for_each(|(l, k)| h.magnitude_homology(l, k).map(|_| ()))?;
    let report = h.is_diagonal(lmax, kmax)?;
    let cells: Vec<Cell> = report
        .witnesses
        .iter()
        .map(|(l, k, s)| Cell::new("MH", None, vec![*l, *k], s))
        .collect();
    let mut verdicts = vec![Verdict::info(
        "diagonal within bounds",
        report.is_diagonal_within_bounds(),
        report.witnesses.first().map(|(l, k, s)| describe_cell("MH", *l, *k, s)),
    )];
    if report.is_diagonal_within_bounds() {
        verdicts.extend(diagonal_consequences(&h, &g, lmax, kmax)?);
    }
    Ok(Report::new("diagonal", input_digest(&g), box_bounds(lmax, kmax), cells, verdicts))
}

/// Consequences of diagonality that the box actually implies. A degree `j + 1`
/// tuple has `L ≤ (j + 1) · diam`, so once every such cell is known to vanish
/// off the diagonal, the diagonal sequence is exact at `MH^j_j` and `H~_j = 0`.
/// Nothing follows for digraphs with unreachable pairs.
fn diagonal_consequences(h: &HomologyEngine, g: &Digraph, lmax: i64, kmax: i64) -> Result<Vec<Verdict>> {
    let m = match g.diameter() {
        ExtInt::Finite(0) => kmax,
        ExtInt::Finite(d) => kmax.min(lmax / d),
        ExtInt::Infinite => return Ok(Vec::new()),
    };
    let defects = h.diagonal_exactness_defects(m - 1)?;
    let exact = defects.first().map(|(j, s)| format!("homology {s} at MH^{j}_{j}"));
    let mut path = None;
    for k in -1..m {
        let s = h.reduced_path_homology(k)?.shape();
        if !s.is_zero() {
            path = Some(format!("H~_{k} = {s}"));
            break;
        }
    }
    Ok(vec![
        Verdict::check("diagonal sequence is exact", exact),
        Verdict::check("diagonal implies vanishing path homology", path),
    ])
}

pub fn cmd_homotopy(g: Arc<Digraph>, assignments: &[Vec<usize>]) -> Result<Report> {
    let mut verdicts = Vec::new();
    let mut maps = Vec::new();
    for (i, a) in assignments.iter().enumerate() {
        match DigraphMap::checked(g.clone(), g.clone(), a.clone()) {
            Ok(f) => {
                verdicts.push(Verdict::check(&format!("map {} is a digraph map", i + 1), None));
                maps.push(f);
            }
            Err(e) => verdicts.push(Verdict::check(&format!("map {} is a digraph map", i + 1), Some(e.to_string()))),
        }
    }
    if maps.len() == assignments.len() {
        for (i, pair) in maps.windows(2).enumerate() {
            let ok = one_step_homotopic(&pair[0], &pair[1])?;
            let witness = (!ok).then(|| "neither f(x) => g(x) for all x nor g(x) => f(x) for all x".to_string());
            verdicts.push(Verdict::check(&format!("maps {} and {} are one-step homotopic", i + 1, i + 2), witness));
        }
        let certified = homotopy_along_chain(&maps)?;
        verdicts.push(Verdict::check(
            "chain certifies a homotopy from the first map to the last",
            (!certified).then(|| "some consecutive pair is not one-step homotopic".to_string()),
        ));
    }
    Ok(Report::new("homotopy", input_digest(&g), Bounds::default(), vec![], verdicts))
}

const SAMPLES_PER_CELL: usize = 40;

/// Evenly spaced tuples of `MC^l_k`, at most [`SAMPLES_PER_CELL`].
fn sample(h: &HomologyEngine, l: i64, k: i64) -> Vec<Tuple> {
    let basis = h.mc(l, k);
    let step = basis.len().div_ceil(SAMPLES_PER_CELL).max(1);
    basis.tuples().iter().step_by(step).cloned().collect()
}

fn first_failure<T, F>(items: impl IntoIterator<Item = T>, mut check: F) -> Result<Option<String>>
where
    F: FnMut(T) -> Result<Option<String>>,
{
    for item in items {
        if let Some(w) = check(item)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

pub fn cmd_verify(g: Arc<Digraph>, lmax: i64, kmax: i64, nmax: i64) -> Result<Report> {
    let h = HomologyEngine::new(g.clone());
    let fc = build_filtered_complex(g.clone(), nmax)?;
    grid(lmax, kmax).into_par_iter().try_for_each(|(l, k)| h.dmh(l, k).map(|_| ()))?;
    let mut verdicts = Vec::new();

    let pipelines = first_failure(-1..=kmax, |k| {
        let direct = h.reduced_path_homology(k)?.shape();
        let via = h.dmh(k, k)?.shape();
        Ok((direct != via).then(|| format!("k = {k}: H~ = {direct}, dMH^k_k = {via}")))
    })?;
    verdicts.push(Verdict::check("path homology equals dMH on the diagonal", pipelines));

    let same_level = first_failure(grid(lmax, kmax + 1), |(l, k)| {
        let d = face_matrix(&h.mc(l, k), &h.mc(l, k - 1));
        let e = face_matrix(&h.mc(l, k + 1), &h.mc(l, k));
        Ok((!d.mul(&e).is_zero()).then(|| format!("level {l}, degree {}", k + 1)))
    })?;
    let full = first_failure(grid(lmax, kmax + 1), |(l, k)| {
        Ok(sample(&h, l, k)
            .into_iter()
            .find(|t| !Chain::tuple(t.clone()).boundary().boundary().is_zero())
            .map(|t| format!("{}", t.display(&g))))
    })?;
    verdicts.push(Verdict::check("same-level boundary squares to zero", same_level));
    verdicts.push(Verdict::check("full boundary squares to zero on sampled tuples", full));

    let drop_one = first_failure(grid(lmax, kmax), |(l, k)| {
        let d = h.dmh_differential(l, k)?.then(&*h.dmh_differential(l - 1, k - 1)?)?;
        Ok((!d.is_zero()).then(|| format!("MH^{l}_{k}")))
    })?;
    verdicts.push(Verdict::check("drop-one differential squares to zero on MH", drop_one));

    verdicts.extend(prism_checks(&h, &g, lmax, kmax)?);
    verdicts.extend(spectral_checks(&fc, &h, nmax)?);

    let diagonal = h.is_diagonal(lmax, kmax)?;
    verdicts.push(Verdict::info(
        "diagonal within bounds",
        diagonal.is_diagonal_within_bounds(),
        diagonal.witnesses.first().map(|(l, k, s)| describe_cell("MH", *l, *k, s)),
    ));
    if diagonal.is_diagonal_within_bounds() {
        verdicts.extend(diagonal_consequences(&h, &g, lmax, kmax)?);
    }
    let cells = diagonal
        .witnesses
        .iter()
        .map(|(l, k, s)| Cell::new("MH", None, vec![*l, *k], s))
        .collect();
    let bounds = Bounds {
        lmax: Some(lmax),
        kmax: Some(kmax),
        nmax: Some(nmax),
        rmax: None,
    };
    Ok(Report::new("verify", input_digest(&g), bounds, cells, verdicts))
}

fn prism_checks(h: &HomologyEngine, g: &Digraph, lmax: i64, kmax: i64) -> Result<Vec<Verdict>> {
    let gi = cartesian_product(g, &interval());
    let mut boundary = None;
    let mut levels = None;
    for (l, k) in grid(lmax, kmax) {
        let here = sample(h, l, k);
        let above = sample(h, l + 1, k);
        for (i, t) in here.iter().enumerate() {
            let x = Chain::tuple(t.clone());
            if boundary.is_none() {
                let lhs = x.prism().boundary();
                let rhs = &(&(-&x.boundary().prism()) + &x.top()) - &x.bottom();
                if lhs != rhs {
                    boundary = Some(format!("{}", t.display(g)));
                }
            }
            if levels.is_none() {
                let mixed = match above.get(i % above.len().max(1)) {
                    Some(u) => &x + &Chain::tuple(u.clone()),
                    None => x.clone(),
                };
                if mixed.prism().level_part(&gi, l + 1) != mixed.level_part(g, l).prism() {
                    levels = Some(format!("{} at level {l}", t.display(g)));
                }
            }
        }
    }
    Ok(vec![
        Verdict::check("prism boundary identity on sampled tuples", boundary),
        Verdict::check("prism raises level by one on sampled tuples", levels),
    ])
}

fn spectral_checks(fc: &FilteredComplex, h: &HomologyEngine, nmax: i64) -> Result<Vec<Verdict>> {
    let cap = fc.level_cap();
    let cells: Vec<(i64, i64)> = (0..=nmax).flat_map(|n| (-1..=cap).map(move |l| (l, n))).collect();

    let identification = first_failure(cells.iter().copied(), |(l, n)| {
        let e0 = fc.page_cell(l, Page::Finite(0), n)?.generator_count();
        let mc = h.mc(l, n).len();
        if e0 != mc {
            return Ok(Some(format!("E^0 at ({l}, {n}) has {e0} generators, MC has {mc}")));
        }
        let e1 = fc.page_cell(l, Page::Finite(1), n)?.shape();
        let mh = h.magnitude_homology(l, n)?.shape();
        if e1 != mh {
            return Ok(Some(format!("E^1 at ({l}, {n}) is {e1}, MH is {mh}")));
        }
        let e2 = fc.page_cell(l, Page::Finite(2), n)?.shape();
        let d = h.dmh(l, n)?.shape();
        if e2 != d {
            return Ok(Some(format!("E^2 at ({l}, {n}) is {e2}, dMH is {d}")));
        }
        Ok(None)
    })?;

    let limit = first_failure(cells.iter().copied(), |(l, n)| {
        let e = fc.page_cell(l, Page::Infinity, n)?.shape();
        Ok((!e.is_zero()).then(|| format!("E^inf at ({l}, {n}) is {e}")))
    })?;

    let pages = [Page::Finite(0), Page::Finite(1), Page::Finite(2), Page::Finite(3), Page::Infinity];
    let routes = first_failure(cells.iter().copied(), |(l, n)| {
        Ok(pages
            .iter()
            .find(|&&r| !same_lattice(&fc.b_submodule(l, r, n), &fc.b_submodule_via_z(l, r, n)))
            .map(|r| format!("B at ({l}, {n}) on page {r}")))
    })?;

    let recursion = first_failure(cells.iter().copied().filter(|&(_, n)| n < nmax), |(l, n)| {
        for r in 0..=2 {
            let via = fc.page_homology(l, r, n)?;
            let direct = fc.page_cell(l, Page::Finite(r + 1), n)?;
            if !via.isomorphic(&direct) {
                return Ok(Some(format!("({l}, {n}): homology of page {r} is {}, page {} is {}", via.describe(), r + 1, direct.describe())));
            }
        }
        Ok(None)
    })?;

    Ok(vec![
        Verdict::check("pages 0, 1, 2 are MC, MH, dMH", identification),
        Verdict::check("limit page vanishes", limit),
        Verdict::check("approximate boundaries agree by both constructions", routes),
        Verdict::check("homology of each page is the next page", recursion),
    ])
}
