use std::path::{Path, PathBuf};

use kgcx_core::csg::{run_csg, sweep as run_sweep, write_sweep_csv, CsgConfig};
use kgcx_core::embeddings::{load_embeddings, EmbeddingSource};
use kgcx_core::graph::{load_dataset, write_jsonl, KnowledgeGraph, SplitSelection};
use kgcx_core::report::{
    build_report, load_performance, read_profile, ComplexityProfile, DatasetCounts, Normalization, Provenance,
    PROFILE_VERSION,
};
use kgcx_core::seeding::{derive_seed, sha256_hex};
use kgcx_core::semantic::semantic_profile;
use kgcx_core::structural::{structural_profile, StructuralConfig};
use kgcx_core::{EmbeddingTable, Error, Result};
use serde_json::json;

use crate::args::{CorrelateArgs, CsgArgs, EmbeddingArgs, ProfileArgs, SweepArgs};
use crate::manifest::Manifest;

fn dataset_name(dir: &Path) -> String {
    dir.canonicalize()
        .ok()
        .as_deref()
        .unwrap_or(dir)
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into())
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_file(path: &Path, body: &[u8], manifest: &mut Manifest) -> Result<()> {
    std::fs::write(path, body).map_err(|e| Error::io(path, e))?;
    manifest.add_output(path);
    Ok(())
}

fn to_json_bytes<T: serde::Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut body = serde_json::to_vec_pretty(value)?;
    body.push(b'\n');
    Ok(body)
}

/// Load the dataset and record the digests of the split files read.
fn load(dir: &Path, selection: SplitSelection, manifest: &mut Manifest) -> Result<(KnowledgeGraph, Vec<(String, String)>)> {
    log::info!("loading {} ({selection})", dir.display());
    let kg = load_dataset(dir, selection)?;
    let mut digests = Vec::new();
    for split in selection.splits() {
        let path = dir.join(split.file_name());
        digests.push((split.file_name().to_owned(), manifest.add_input(&path)?));
    }
    log::info!("{} entities, {} relations, {} triples", kg.num_entities(), kg.num_relations(), kg.num_triples());
    Ok((kg, digests))
}

fn embeddings(args: &EmbeddingArgs, seed: u64, manifest: &mut Manifest) -> Result<(EmbeddingTable, serde_json::Value)> {
    let fallback_seed = derive_seed(seed, "fallback-embeddings");
    match &args.embeddings {
        Some(path) => {
            let digest = manifest.add_input(path)?;
            let mut table: EmbeddingTable = load_embeddings(path)?;
            if args.allow_fallback_fill {
                table = table.with_fallback_fill(fallback_seed);
            }
            let desc = json!({
                "source": table.source(),
                "dimension": table.dimension(),
                "sha256": digest,
                "fallback_fill": args.allow_fallback_fill,
            });
            Ok((table, desc))
        }
        None => {
            let table = EmbeddingTable::fallback(args.dim, fallback_seed)?;
            let desc = json!({ "source": EmbeddingSource::Fallback { seed: fallback_seed }, "dimension": args.dim });
            Ok((table, desc))
        }
    }
}

pub fn profile(args: &ProfileArgs, seed: u64) -> Result<()> {
    let selection = SplitSelection::from(args.splits);
    let structural_cfg = StructuralConfig { seed, ..Default::default() };
    let config = json!({
        "dataset": args.dataset,
        "splits": selection,
        "structural": structural_cfg,
        "seed": seed,
        "out": args.out,
        "dump_dataset": args.dump_dataset,
    });
    let mut manifest = Manifest::new("profile", config);
    let (kg, digests) = load(&args.dataset, selection, &mut manifest)?;
    let name = dataset_name(&args.dataset);

    let semantic = semantic_profile(&kg)?;
    let semantic_alternate = match load_dataset(&args.dataset, selection.other()) {
        Ok(other) => {
            for split in selection.other().splits() {
                manifest.add_input(&args.dataset.join(split.file_name()))?;
            }
            Some(semantic_profile(&other)?)
        }
        Err(Error::MissingSplit(path)) => {
            log::warn!("no alternate semantic profile: {} is missing", path.display());
            None
        }
        Err(e) => return Err(e),
    };
    log::info!("structural metrics on {} nodes", kg.num_entities());
    let structural = structural_profile(&kg, &structural_cfg)?;

    let hashed = json!({ "splits": selection, "structural": structural_cfg });
    let profile = ComplexityProfile {
        profile_version: PROFILE_VERSION,
        dataset: name.clone(),
        split_selection: selection,
        counts: DatasetCounts {
            entities: kg.num_entities(),
            relations: kg.num_relations(),
            triples: kg.num_triples(),
            splits: kg.split_counts(),
        },
        csg_records: Vec::new(),
        semantic,
        semantic_alternate,
        structural,
        provenance: Provenance {
            tool_version: env!("CARGO_PKG_VERSION").into(),
            config_hash: sha256_hex(hashed.to_string().as_bytes()),
            inputs: digests.into_iter().collect(),
        },
    };
    create_dir(&args.out)?;
    write_file(&args.out.join(format!("{name}.profile.json")), &to_json_bytes(&profile)?, &mut manifest)?;
    if args.dump_dataset {
        let mut buf = Vec::new();
        write_jsonl(&kg, &mut buf)?;
        write_file(&args.out.join(format!("{name}.dataset.jsonl")), &buf, &mut manifest)?;
    }
    manifest.write(&args.out)?;
    Ok(())
}

pub fn csg(args: &CsgArgs, seed: u64) -> Result<()> {
    let selection = SplitSelection::from(args.splits);
    let cfg = CsgConfig {
        k: args.k,
        n_samples: args.samples,
        classes: args.classes.selection(args.selection),
        k_c: args.k_c,
        seed,
    };
    let config = json!({
        "dataset": args.dataset,
        "splits": selection,
        "csg": cfg,
        "embeddings": args.embedding.embeddings,
        "dim": args.embedding.dim,
        "allow_fallback_fill": args.embedding.allow_fallback_fill,
        "profile": args.profile,
        "out": args.out,
    });
    let mut manifest = Manifest::new("csg", config);
    let (kg, _) = load(&args.dataset, selection, &mut manifest)?;
    let (table, embedding_desc) = embeddings(&args.embedding, seed, &mut manifest)?;
    log::info!("CSG with k = {}, N_s = {}, classes = {:?}", cfg.k, cfg.n_samples, cfg.classes);
    let (record, spectrum) = run_csg(&kg, &table, &cfg)?;

    if let Some(profile_path) = &args.profile {
        manifest.add_input(profile_path)?;
        let mut profile = read_profile(profile_path)?;
        profile.csg_records.push(record);
        write_file(profile_path, &to_json_bytes(&profile)?, &mut manifest)?;
        manifest.write(profile_path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new(".")))?;
        return Ok(());
    }
    let name = dataset_name(&args.dataset);
    let doc = json!({
        "dataset": name,
        "split_selection": selection,
        "embeddings": embedding_desc,
        "record": record,
        "eigenvalues": spectrum.eigenvalues,
        "partial_spectrum": spectrum.partial,
        "max_residual": spectrum.max_residual,
    });
    create_dir(&args.out)?;
    write_file(&args.out.join(format!("{name}.csg.json")), &to_json_bytes(&doc)?, &mut manifest)?;
    manifest.write(&args.out)?;
    Ok(())
}

pub fn sweep(args: &SweepArgs, seed: u64) -> Result<()> {
    let selection = SplitSelection::from(args.splits);
    let classes: Vec<_> = args.classes.iter().map(|c| c.selection(args.selection)).collect();
    let config = json!({
        "dataset": args.dataset,
        "splits": selection,
        "k": args.k.0,
        "classes": classes,
        "samples": args.samples,
        "seed": seed,
        "embeddings": args.embedding.embeddings,
        "dim": args.embedding.dim,
        "allow_fallback_fill": args.embedding.allow_fallback_fill,
        "out": args.out,
    });
    let mut manifest = Manifest::new("sweep", config);
    let (kg, _) = load(&args.dataset, selection, &mut manifest)?;
    let (table, _) = embeddings(&args.embedding, seed, &mut manifest)?;
    let name = dataset_name(&args.dataset);
    let rows = run_sweep(&name, &kg, &table, &args.k.0, &classes, args.samples, seed)?;
    let mut buf = Vec::new();
    write_sweep_csv(&mut buf, &rows)?;
    create_dir(&args.out)?;
    write_file(&args.out.join(format!("{name}.sweep.csv")), &buf, &mut manifest)?;
    manifest.write(&args.out)?;
    Ok(())
}

pub fn correlate(args: &CorrelateArgs, seed: u64) -> Result<()> {
    let normalization = if args.zscore { Normalization::ZScore } else { Normalization::MinMax };
    let config = json!({
        "profiles": args.profiles,
        "perf": args.perf,
        "normalization": normalization,
        "seed": seed,
        "out": args.out,
    });
    let mut manifest = Manifest::new("correlate", config);
    let mut profiles = Vec::with_capacity(args.profiles.len());
    for p in &args.profiles {
        manifest.add_input(p)?;
        profiles.push(read_profile(p)?);
    }
    manifest.add_input(&args.perf)?;
    let perf = load_performance(&args.perf)?;
    let report = build_report(&profiles, &perf, normalization)?;
    let written: Vec<PathBuf> = report.write_to(&args.out)?;
    for path in &written {
        manifest.add_output(path);
    }
    manifest.write(&args.out)?;
    Ok(())
}
