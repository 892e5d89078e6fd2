import json

import pytest

from tweetscope import pipeline
from tweetscope.fixtures import make_fixture


@pytest.fixture(scope="session")
def fixture_dir(tmp_path_factory):
    path = tmp_path_factory.mktemp("corpus")
    make_fixture(path)
    return path


@pytest.fixture(scope="session")
def truth(fixture_dir):
    return json.loads((fixture_dir / "truth.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def fixture_config(fixture_dir):
    return pipeline.load_config(fixture_dir / "config.json")


@pytest.fixture(scope="session")
def fixture_run(fixture_config):
    """One full pipeline run over the bundled synthetic corpus, shared by
    the API and acceptance tests."""
    manifest = pipeline.run_pipeline(fixture_config)
    return {
        "config": fixture_config,
        "manifest": manifest,
        "artifacts": pipeline.Artifacts(fixture_config.out_dir),
    }
