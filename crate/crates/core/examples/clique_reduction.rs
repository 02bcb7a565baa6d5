//! Clique reduction of a small nonnegative network, with the audit of every
//! structural property the reduction guarantees.

use sparse_ldp::randgen::sample_network;
use sparse_ldp::transforms::{audit_reduction, clique_reduce, vertex_split};
use sparse_ldp::{DirectedNetwork, Result, RngHandle, WeibullSpec};

fn main() -> Result<()> {
    // 0 -> 1 -> 2 -> 0 plus a loop at 1.
    let w = DirectedNetwork::new(
        3,
        vec![
            (0, 1, 1.0),
            (1, 1, 0.5),
            (1, 2, 1.0),
            (2, 0, 1.0),
        ],
    )?;
    let (split, map) = vertex_split(&w);
    println!("split: {} vertices, {} entries", split.order(), split.nnz());
    for (orig, ids) in map.iter() {
        println!("  {orig} -> plus {:?}, minus {:?}", ids.plus, ids.minus);
    }
    let r = clique_reduce(&w)?;
    for e in r.h.edges() {
        println!("  H edge {} -- {} ({})", e.u, e.v, e.weight);
    }

    let spec = WeibullSpec::new(0.8)?;
    let z = sample_network(150, 1.5, &spec, &mut RngHandle::new(3, 0).rng())?.abs();
    let r = clique_reduce(&z)?;
    let audit = audit_reduction(&z, &r)?;
    println!(
        "random W: |E| {} -> {}, vertices {} -> {}, triangles {}",
        audit.edges_w, audit.edges_h, audit.vertices_w, audit.vertices_h, audit.triangles
    );
    println!(
        "||W|| = {:.6}, ||split|| = {:.6}, ||H|| = {:.6}, all properties hold: {}",
        audit.norm_w,
        audit.norm_split,
        audit.norm_h,
        audit.all_hold(1e-9)
    );
    Ok(())
}
