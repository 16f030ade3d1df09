//! Command-line front end and HTTP service for the omwa engine.

pub mod args;
pub mod commands;
pub mod service;

use std::sync::Arc;

use anyhow::{Context, Result};

use args::{Cli, Command, ServeArgs};

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(a) => commands::simulate(&a),
        Command::TrainOffline(a) => commands::train(&a),
        Command::Serve(a) => tokio::runtime::Runtime::new()?.block_on(serve(a)),
        Command::ExportVocab(a) => commands::export_vocab(&a),
        Command::ImportVocab(a) => commands::import_vocab(&a),
        Command::PrepareCorpus(a) => commands::prepare(&a),
    }
}

async fn serve(args: ServeArgs) -> Result<()> {
    let table = commands::builtin_table();
    let config = args.engine_args.config();
    config.validate()?;
    let mut engine = commands::open_engine(args.snapshot.as_deref(), config, table.clone())?;
    if let Some(path) = &args.segment_corpus {
        engine = engine.with_syllable_lm(Arc::new(commands::syllable_lm(path, &table)?));
    }
    let state = service::AppState::new(engine, args.snapshot.clone());
    let addr = format!("{}:{}", args.host, args.port);
    let listener = tokio::net::TcpListener::bind(&addr)
        .await
        .with_context(|| format!("binding {addr}"))?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, service::router(state.clone()))
        .with_graceful_shutdown(shutdown_signal())
        .await?;
    state.save().await?;
    if let Some(dir) = &args.snapshot {
        eprintln!("saved snapshot to {}", dir.display());
    }
    Ok(())
}

async fn shutdown_signal() {
    let ctrl_c = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let term = async {
        match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            Ok(mut s) => {
                s.recv().await;
            }
            Err(_) => std::future::pending().await,
        }
    };
    #[cfg(not(unix))]
    let term = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {}
        _ = term => {}
    }
}
