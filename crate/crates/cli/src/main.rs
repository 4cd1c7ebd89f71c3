use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use quartic::census::enumerate_census;
use quartic::chamber::{chamber_decomposition, oracle_fingerprints};
use quartic::curve::{curve_from_coefficients, Convention, Point2, TropicalLine, TropicalQuartic};
use quartic::db::{build_collection, default_store_path, read_id_map, Collection};
use quartic::motif::{all_motifs, find_all_motifs, is_generic, motif_shape, MotifCatalog, CATALOG_ENV};
use quartic::oracle::enumerate_bitangent_classes;
use quartic::pluecker::{count_for_conditions, sweep_conditions, SignVector};
use quartic::rational::format_q;
use quartic::subdivision::{secondary_cone, Triangulation, WeightVector};
use quartic::Q;

#[derive(Parser)]
#[command(name = "quartic", version, about = "Smooth tropical plane quartics and their bitangents")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Motif catalog (JSON with a sibling `.manifest.json`).
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    /// Document store directory.
    #[arg(long, global = true)]
    store: Option<PathBuf>,
    /// TOML file with optional `store` and `catalog` paths.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Vertices and edges of the tropical quartic with the given coefficients.
    Curve(CoeffArgs),
    /// Bitangent classes found by the geometric oracle.
    Bitangents(CoeffArgs),
    /// Deformation motifs of a triangulation.
    Motifs(TriArgs),
    /// The seven real-lifting sign conditions of a triangulation.
    Signs(TriArgs),
    /// Number of real bitangents for a sign vector, or every achievable number.
    Pluecker {
        #[command(flatten)]
        tri: TriArgs,
        /// Comma-separated signs ±1, one per coefficient.
        #[arg(long, allow_hyphen_values = true)]
        vector: Option<String>,
    },
    /// Shape-constant chambers of one motif inside the secondary cone.
    Chambers {
        #[command(flatten)]
        tri: TriArgs,
        /// Index of the motif, in the order printed by `motifs`.
        #[arg(long, default_value_t = 0)]
        motif: usize,
    },
    /// Enumerates all triangulations up to symmetry and writes the store.
    Census {
        /// Published (id, maximal_cells) pairs to take ids from.
        #[arg(long)]
        id_map: Option<PathBuf>,
    },
    /// Document store operations.
    #[command(subcommand)]
    Db(DbCommand),
    /// SVG picture of a quartic, optionally with a tropical line and the bitangent classes.
    Render {
        #[command(flatten)]
        coeffs: CoeffArgs,
        /// Vertex `x,y` of a tropical line to draw.
        #[arg(long, allow_hyphen_values = true)]
        line: Option<String>,
        /// Overlay the oracle's bitangent cells.
        #[arg(long)]
        classes: bool,
    },
}

#[derive(Subcommand)]
enum DbCommand {
    /// Builds the store from a fresh census.
    Build {
        #[arg(long)]
        id_map: Option<PathBuf>,
    },
    /// Id of the document for a triangulation.
    Find {
        #[arg(long)]
        cells: String,
    },
    /// Documents matching a filter such as `is_generic=false & pluecker_numbers~28`.
    Query {
        #[arg(default_value = "", allow_hyphen_values = true)]
        filter: String,
    },
    /// Prints one document.
    Show {
        #[arg(long)]
        id: u32,
    },
    /// Recomputes every document and lists those that differ.
    Audit,
}

#[derive(Args)]
struct CoeffArgs {
    /// Comma-separated rational coefficients, one per lattice point.
    #[arg(long, allow_hyphen_values = true)]
    coeffs: String,
    #[arg(long, default_value = "min")]
    convention: Convention,
}

#[derive(Args)]
struct TriArgs {
    /// JSON list of cells, e.g. `[[0,1,2],[1,2,4],...]`.
    #[arg(long, conflicts_with = "id", required_unless_present = "id")]
    cells: Option<String>,
    /// Document id in the store.
    #[arg(long)]
    id: Option<u32>,
}

#[derive(Debug, Default, Deserialize)]
struct Config {
    store: Option<PathBuf>,
    catalog: Option<PathBuf>,
}

struct AppContext {
    json: bool,
    store: PathBuf,
    catalog: Option<PathBuf>,
}

impl AppContext {
    fn new(cli: &Cli) -> Result<Self> {
        let config: Config = match &cli.config {
            Some(p) => toml::from_str(&fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?)
                .with_context(|| format!("parsing {}", p.display()))?,
            None => Config::default(),
        };
        Ok(AppContext {
            json: cli.json,
            store: cli.store.clone().or(config.store).unwrap_or_else(default_store_path),
            catalog: cli.catalog.clone().or(config.catalog),
        })
    }

    fn catalog(&self) -> Result<MotifCatalog> {
        let cat = match &self.catalog {
            Some(p) => MotifCatalog::load(p)?,
            None => MotifCatalog::from_env().with_context(|| format!("loading catalog (${CATALOG_ENV})"))?,
        };
        Ok(cat)
    }

    fn collection(&self) -> Result<Collection> {
        Collection::load(&self.store).with_context(|| format!("opening store {}", self.store.display()))
    }

    fn triangulation(&self, a: &TriArgs) -> Result<Triangulation> {
        match (&a.cells, a.id) {
            (Some(c), _) => Ok(Triangulation::parse_json(c)?),
            (None, Some(id)) => {
                let col = self.collection()?;
                let d = col.get(id).with_context(|| format!("no document with id {id}"))?;
                Ok(d.maximal_cells.clone())
            }
            (None, None) => bail!("give --cells or --id"),
        }
    }
}

fn print_json<T: Serialize>(v: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn point(p: &Point2) -> String {
    format!("({}, {})", format_q(&p.x), format_q(&p.y))
}

fn cells_string(cells: &[[u8; 3]]) -> String {
    serde_json::to_string(cells).unwrap_or_default()
}

fn load_curve(a: &CoeffArgs) -> Result<TropicalQuartic> {
    let c = WeightVector::parse(&a.coeffs)?;
    Ok(curve_from_coefficients(&c, a.convention)?)
}

fn cmd_curve(ctx: &AppContext, a: &CoeffArgs) -> Result<()> {
    let curve = load_curve(a)?;
    if ctx.json {
        return print_json(&curve);
    }
    println!("triangulation {}", curve.triangulation);
    println!("{} vertices", curve.vertices.len());
    for (t, p) in &curve.vertices {
        println!("  {:<12} {}", cells_string(&[*t]), point(p));
    }
    println!("{} edges", curve.edges.len());
    for e in &curve.edges {
        let end = match &e.end {
            Some(p) => point(p),
            None => "ray".into(),
        };
        let len = e.lattice_length().map(|l| format_q(&l)).unwrap_or_else(|| "inf".into());
        println!(
            "  {:<8} {} -> {}  dir ({},{})  length {}",
            format!("{:?}", e.dual),
            point(&e.start),
            end,
            e.direction.0,
            e.direction.1,
            len
        );
    }
    Ok(())
}

fn cmd_bitangents(ctx: &AppContext, a: &CoeffArgs) -> Result<()> {
    let curve = load_curve(a)?;
    let classes = enumerate_bitangent_classes(&curve);
    if ctx.json {
        #[derive(Serialize)]
        struct Row<'a> {
            class: &'a quartic::oracle::BitangentClass,
            fingerprint: quartic::oracle::Fingerprint,
        }
        let rows: Vec<Row> = classes.iter().map(|c| Row { class: c, fingerprint: c.fingerprint() }).collect();
        return print_json(&rows);
    }
    println!("{} bitangent classes", classes.len());
    for (i, c) in classes.iter().enumerate() {
        println!("  {i}  dim {}  cells {:>3}  sample {}  {}", c.dimension(), c.cells.len(), point(&c.cells[0].sample), c.fingerprint());
    }
    Ok(())
}

fn warn_incomplete(found: usize) {
    if found != quartic::motif::MOTIFS_PER_TRIANGULATION {
        eprintln!("warning: the catalog matched {found} of 7 motifs; the list is incomplete");
    }
}

fn cmd_motifs(ctx: &AppContext, a: &TriArgs) -> Result<()> {
    let t = ctx.triangulation(a)?;
    let ms = find_all_motifs(&t, &ctx.catalog()?);
    warn_incomplete(ms.len());
    if ctx.json {
        return print_json(&ms);
    }
    for (i, m) in ms.iter().enumerate() {
        println!("{i}  {:<6} sigma {}  {}", m.type_name, m.symmetry, cells_string(&m.triangles));
    }
    Ok(())
}

fn cmd_signs(ctx: &AppContext, a: &TriArgs) -> Result<()> {
    let t = ctx.triangulation(a)?;
    let ms = all_motifs(&t, &ctx.catalog()?)?;
    if ctx.json {
        return print_json(&ms.iter().map(|m| &m.sign_conditions).collect::<Vec<_>>());
    }
    for m in &ms {
        println!("{}", m.sign_conditions);
    }
    Ok(())
}

fn cmd_pluecker(ctx: &AppContext, a: &TriArgs, vector: Option<&str>) -> Result<()> {
    let t = ctx.triangulation(a)?;
    if !is_generic(&t) {
        bail!(quartic::Error::NonGeneric);
    }
    let conds: Vec<_> = all_motifs(&t, &ctx.catalog()?)?.into_iter().map(|m| m.sign_conditions).collect();
    match vector {
        Some(v) => {
            let n = count_for_conditions(&conds, &SignVector::parse(v)?);
            if ctx.json {
                print_json(&n)
            } else {
                println!("{n}");
                Ok(())
            }
        }
        None => {
            let r = sweep_conditions(&conds);
            if ctx.json {
                return print_json(&r);
            }
            for (n, s) in &r.representatives {
                println!("{n:>2}  {s}");
            }
            Ok(())
        }
    }
}

fn cmd_chambers(ctx: &AppContext, a: &TriArgs, index: usize) -> Result<()> {
    let t = ctx.triangulation(a)?;
    let cat = ctx.catalog()?;
    let ms = find_all_motifs(&t, &cat);
    warn_incomplete(ms.len());
    let m = ms.get(index).with_context(|| format!("motif index {index} out of range (found {})", ms.len()))?;
    let generic = is_generic(&t);
    let cd = chamber_decomposition(&secondary_cone(&t), &m.hyperplanes);
    #[derive(Serialize)]
    struct Row {
        pattern: String,
        dimension: usize,
        interior_point: WeightVector,
        shape: quartic::motif::ShapeOutcome,
        fingerprints: Vec<quartic::oracle::Fingerprint>,
    }
    let rows = cd
        .chambers
        .into_iter()
        .map(|c| {
            let shape = motif_shape(m, &c.interior_point, generic, &cat);
            let fingerprints = oracle_fingerprints(&c.interior_point)?;
            Ok(Row { pattern: c.pattern, dimension: c.dimension, interior_point: c.interior_point, shape, fingerprints })
        })
        .collect::<Result<Vec<_>>>()?;
    if ctx.json {
        return print_json(&rows);
    }
    println!("motif {index} {}  {} hyperplanes", m.type_name, m.hyperplanes.len());
    for r in &rows {
        let pt: Vec<String> = r.interior_point.entries().iter().map(format_q).collect();
        println!("  {:<6} dim {:>2}  shape {:<8} point {}", r.pattern, r.dimension, r.shape.to_string(), pt.join(","));
        for f in &r.fingerprints {
            println!("      {f}");
        }
    }
    Ok(())
}

fn cmd_build(ctx: &AppContext, id_map: Option<&Path>) -> Result<()> {
    let census = enumerate_census();
    let cat = ctx.catalog()?;
    let entries = id_map.map(read_id_map).transpose()?;
    let map = entries.as_deref().zip(id_map.map(|p| p.display().to_string()));
    let col = build_collection(&census, &cat, map)?;
    col.save(&ctx.store).with_context(|| format!("writing store {}", ctx.store.display()))?;
    let generic = col.documents.iter().filter(|d| d.is_generic).count();
    if ctx.json {
        return print_json(&col.meta);
    }
    println!("orbits            {}", census.len());
    println!("labeled           {}", census.labeled_count());
    println!("non-regular seen  {}", census.non_regular_seen);
    println!("generic           {generic}");
    println!("non-generic       {}", col.documents.len() - generic);
    println!("catalog complete  {}", col.meta.catalog_complete);
    println!("store             {}", ctx.store.display());
    Ok(())
}

fn cmd_db(ctx: &AppContext, c: &DbCommand) -> Result<()> {
    match c {
        DbCommand::Build { id_map } => cmd_build(ctx, id_map.as_deref()),
        DbCommand::Find { cells } => {
            let t = Triangulation::parse_json(cells)?;
            let id = ctx.collection()?.find_in_database(&t)?;
            println!("{id}");
            Ok(())
        }
        DbCommand::Query { filter } => {
            let col = ctx.collection()?;
            let docs = col.query(filter)?;
            if ctx.json {
                return print_json(&docs);
            }
            for d in &docs {
                let p = d.pluecker_numbers.as_ref().map(|s| format!("{s:?}")).unwrap_or_else(|| "-".into());
                println!("{:>5}  generic {:<5}  motifs {}  pluecker {p}", d.id, d.is_generic, d.deformation_motifs.len());
            }
            println!("{} documents", docs.len());
            Ok(())
        }
        DbCommand::Show { id } => {
            let col = ctx.collection()?;
            print_json(col.get(*id).with_context(|| format!("no document with id {id}"))?)
        }
        DbCommand::Audit => {
            let bad = quartic::db::audit(&ctx.collection()?, &ctx.catalog()?);
            if ctx.json {
                print_json(&bad)?;
            } else {
                println!("{} inconsistent documents", bad.len());
                for id in &bad {
                    println!("  {id}");
                }
            }
            if !bad.is_empty() {
                bail!("audit found {} inconsistent documents", bad.len());
            }
            Ok(())
        }
    }
}

fn f(x: &Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

fn render_svg(curve: &TropicalQuartic, line: Option<&TropicalLine>, classes: bool) -> String {
    let mut pts: Vec<(f64, f64)> = curve.vertices.iter().map(|(_, p)| (f(&p.x), f(&p.y))).collect();
    if let Some(l) = line {
        pts.push((f(&l.vertex.x), f(&l.vertex.y)));
    }
    let cls = if classes { enumerate_bitangent_classes(curve) } else { Vec::new() };
    for c in &cls {
        pts.extend(c.cells.iter().map(|x| (f(&x.sample.x), f(&x.sample.y))));
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let pad = 1.0 + 0.15 * (x1 - x0).max(y1 - y0);
    let (x0, x1, y0, y1) = (x0 - pad, x1 + pad, y0 - pad, y1 + pad);
    let size = 600.0;
    let scale = size / (x1 - x0).max(y1 - y0);
    let sx = |x: f64| (x - x0) * scale;
    let sy = |y: f64| (y1 - y) * scale;
    // Parameter at which a ray from (x, y) in direction d leaves the viewport.
    let exit = |x: f64, y: f64, d: (i64, i64)| {
        let mut t = f64::MAX;
        if d.0 > 0 {
            t = t.min((x1 - x) / d.0 as f64);
        } else if d.0 < 0 {
            t = t.min((x0 - x) / d.0 as f64);
        }
        if d.1 > 0 {
            t = t.min((y1 - y) / d.1 as f64);
        } else if d.1 < 0 {
            t = t.min((y0 - y) / d.1 as f64);
        }
        t
    };
    let w = (x1 - x0) * scale;
    let h = (y1 - y0) * scale;
    let mut s = String::new();
    s.push_str(&format!("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.2} {h:.2}\">\n"));
    s.push_str(&format!("<!-- convention {} coefficients {} -->\n", curve.convention, {
        let c: Vec<String> = curve.coefficients.entries().iter().map(format_q).collect();
        c.join(",")
    }));
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n<g stroke=\"black\" stroke-width=\"2\" fill=\"none\">\n");
    for e in &curve.edges {
        let (ax, ay) = (f(&e.start.x), f(&e.start.y));
        let (bx, by) = match &e.end {
            Some(p) => (f(&p.x), f(&p.y)),
            None => {
                let t = exit(ax, ay, e.direction);
                (ax + t * e.direction.0 as f64, ay + t * e.direction.1 as f64)
            }
        };
        let end = e.end.as_ref().map(point).unwrap_or_else(|| format!("ray ({},{})", e.direction.0, e.direction.1));
        s.push_str(&format!("<!-- edge {:?} {} -> {} -->\n", e.dual, point(&e.start), end));
        s.push_str(&format!("<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\"/>\n", sx(ax), sy(ay), sx(bx), sy(by)));
    }
    s.push_str("</g>\n<g fill=\"black\">\n");
    for (t, p) in &curve.vertices {
        s.push_str(&format!("<!-- vertex {} {} -->\n", cells_string(&[*t]), point(p)));
        s.push_str(&format!("<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\"/>\n", sx(f(&p.x)), sy(f(&p.y))));
    }
    s.push_str("</g>\n");
    if let Some(l) = line {
        let (vx, vy) = (f(&l.vertex.x), f(&l.vertex.y));
        s.push_str(&format!("<!-- line vertex {} -->\n<g stroke=\"steelblue\" stroke-width=\"2\">\n", point(&l.vertex)));
        for d in l.rays() {
            let t = exit(vx, vy, d);
            let (bx, by) = (vx + t * d.0 as f64, vy + t * d.1 as f64);
            s.push_str(&format!("<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\"/>\n", sx(vx), sy(vy), sx(bx), sy(by)));
        }
        s.push_str("</g>\n");
    }
    const COLORS: [&str; 7] = ["crimson", "darkorange", "goldenrod", "seagreen", "teal", "royalblue", "purple"];
    for (i, c) in cls.iter().enumerate() {
        s.push_str(&format!("<g fill=\"{}\" opacity=\"0.7\">\n", COLORS[i % COLORS.len()]));
        for x in &c.cells {
            s.push_str(&format!("<!-- class {i} dim {} sample {} -->\n", x.dim, point(&x.sample)));
            s.push_str(&format!("<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"{}\"/>\n", sx(f(&x.sample.x)), sy(f(&x.sample.y)), 2 + x.dim));
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    s
}

fn cmd_render(a: &CoeffArgs, line: Option<&str>, classes: bool) -> Result<()> {
    let curve = load_curve(a)?;
    let line = line
        .map(|v| -> Result<TropicalLine> {
            let xs = quartic::rational::parse_q_list(v)?;
            if xs.len() != 2 {
                bail!("--line takes two coordinates, got {}", xs.len());
            }
            Ok(TropicalLine::new(Point2::new(xs[0], xs[1]), a.convention))
        })
        .transpose()?;
    print!("{}", render_svg(&curve, line.as_ref(), classes));
    Ok(())
}

fn run() -> Result<()> {
    let cli = Cli::parse();
    let ctx = AppContext::new(&cli)?;
    match &cli.command {
        Command::Curve(a) => cmd_curve(&ctx, a),
        Command::Bitangents(a) => cmd_bitangents(&ctx, a),
        Command::Motifs(a) => cmd_motifs(&ctx, a),
        Command::Signs(a) => cmd_signs(&ctx, a),
        Command::Pluecker { tri, vector } => cmd_pluecker(&ctx, tri, vector.as_deref()),
        Command::Chambers { tri, motif } => cmd_chambers(&ctx, tri, *motif),
        Command::Census { id_map } => cmd_build(&ctx, id_map.as_deref()),
        Command::Db(c) => cmd_db(&ctx, c),
        Command::Render { coeffs, line, classes } => cmd_render(coeffs, line.as_deref(), *classes),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
