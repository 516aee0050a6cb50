import numpy as np
import pytest

from dialectid.embedding import FastTextParams
from dialectid.errors import CorruptFile, VersionMismatch
from dialectid.morph import MorphConfig, default_lexicon
from dialectid.pipeline import (
    PipelineParams,
    fit_pipeline,
    load_model,
    save_model,
)
from dialectid.surface import SurfaceConfig, default_stoplist
from dialectid.svc import SvcParams
from dialectid.synthetic import generate_synthetic
from oracles import random_text

SVC = SvcParams(C=1.0, tolerance=0.01, max_sweeps=30, seed=5)
FT = FastTextParams(dim=12, window=3, epochs=4, bucket_count=800,
                    subword_min=2, subword_max=3, seed=5)


def params_for(source: str) -> PipelineParams:
    return PipelineParams(
        surface=SurfaceConfig(normalize_letters=True, remove_punct_emoji=True,
                              remove_stopwords=True, remove_diacritics=True),
        morph=MorphConfig(mode="lemma_then_stem"),
        feature_source=source,
        ngram=(1, 2) if source == "tfidf_union" else None,
        max_features=300 if source == "tfidf_union" else None,
        weights=(0.5, 0.75, 1.0),
        svc=SVC,
        fasttext=None if source == "tfidf_union" else FT,
    )


@pytest.fixture(scope="module")
def corpus():
    train, _, _ = generate_synthetic(3, 24, 12, 30, (4, 9), 13)
    return train


@pytest.mark.parametrize(
    "source", ["tfidf_union", "fasttext_supervised", "fasttext_unsupervised"]
)
class TestRoundTrip:
    def test_bit_identical_predictions(self, tmp_path, corpus, source):
        pipe = fit_pipeline(corpus, params_for(source),
                            stoplist=default_stoplist(),
                            lexicon=default_lexicon())
        path = tmp_path / "model.bin"
        save_model(path, pipe)
        loaded = load_model(path)
        rng = np.random.default_rng(0)
        fuzz = [random_text(rng, 20) for _ in range(100)]
        texts = fuzz + corpus.texts()[:20]
        np.testing.assert_array_equal(pipe.predict_indices(texts),
                                      loaded.predict_indices(texts))
        assert loaded.predict_labels(texts[:5]) == pipe.predict_labels(texts[:5])

    def test_config_survives(self, tmp_path, corpus, source):
        pipe = fit_pipeline(corpus, params_for(source),
                            stoplist=default_stoplist(),
                            lexicon=default_lexicon())
        path = tmp_path / "model.bin"
        save_model(path, pipe)
        loaded = load_model(path)
        assert loaded.params.surface == pipe.params.surface
        assert loaded.params.morph == pipe.params.morph
        assert loaded.params.feature_source == source
        assert loaded.stoplist == pipe.stoplist
        assert loaded.lexicon.entries == pipe.lexicon.entries
        np.testing.assert_array_equal(loaded.svc.weight_matrix,
                                      pipe.svc.weight_matrix)


class TestCorruption:
    def _saved(self, tmp_path, corpus) -> bytes:
        pipe = fit_pipeline(corpus, params_for("tfidf_union"),
                            stoplist=default_stoplist(),
                            lexicon=default_lexicon())
        path = tmp_path / "model.bin"
        save_model(path, pipe)
        return path.read_bytes()

    def test_truncated_file(self, tmp_path, corpus):
        raw = self._saved(tmp_path, corpus)
        for cut in (3, 5, len(raw) // 2, len(raw) - 1):
            path = tmp_path / f"cut{cut}.bin"
            path.write_bytes(raw[:cut])
            with pytest.raises(CorruptFile) as err:
                load_model(path)
            assert 0 <= err.value.offset <= cut

    def test_bumped_version_byte(self, tmp_path, corpus):
        raw = bytearray(self._saved(tmp_path, corpus))
        raw[4] = 2  # version byte follows the 4-byte magic
        path = tmp_path / "versioned.bin"
        path.write_bytes(bytes(raw))
        with pytest.raises(VersionMismatch) as err:
            load_model(path)
        assert err.value.found == 2
        assert err.value.expected == 1

    def test_bad_magic(self, tmp_path, corpus):
        raw = bytearray(self._saved(tmp_path, corpus))
        raw[0] = ord("X")
        path = tmp_path / "magic.bin"
        path.write_bytes(bytes(raw))
        with pytest.raises(CorruptFile) as err:
            load_model(path)
        assert err.value.offset == 0
