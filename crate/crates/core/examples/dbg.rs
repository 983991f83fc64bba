fn main() {
    use lrem::identification::*;
    use lrem::catalog::CatalogEntry;
    let report = rank_report(&IdentTarget::Catalog(CatalogEntry::Mr2 {
        beta: 0.05, b: 0.095, sigma: 1.0,
    })).unwrap();
    println!("singular values: {:?}", report.singular_values);
    println!("jacobian: {:?}", report.jacobian);
    println!("rank {} weak {}", report.rank, report.weak);
}
