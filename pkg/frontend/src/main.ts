/** DOM wiring: renders controller snapshots and forwards events. */

import { ApiClient } from "./api.js";
import { ConsistencyController } from "./consistency.js";
import { LabelingController } from "./labeling.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

export function mount(): void {
  const api = new ApiClient("");
  const labeling = new LabelingController(api);
  const consistency = new ConsistencyController(api);

  const photo = el<HTMLImageElement>("photo");
  const banner = el<HTMLElement>("stats-banner");
  const status = el<HTMLElement>("status");
  const score = el<HTMLElement>("score");
  const strategyToggle = el<HTMLInputElement>("strategy-uncertainty");
  const strategyNote = el<HTMLElement>("strategy-note");
  const showScoreToggle = el<HTMLInputElement>("show-score");
  const retryBtn = el<HTMLButtonElement>("retry");
  const labelingView = el<HTMLElement>("labeling-view");
  const consistencyView = el<HTMLElement>("consistency-view");
  const consistencyPhoto = el<HTMLImageElement>("consistency-photo");
  const consistencyStatus = el<HTMLElement>("consistency-status");
  const consistencyResult = el<HTMLElement>("consistency-result");

  let view: "labeling" | "consistency" = "labeling";

  labeling.onChange((s) => {
    banner.textContent = labeling.statsBanner();
    status.textContent = s.message ?? s.phase;
    retryBtn.hidden = s.phase !== "error";
    if (s.item) {
      photo.src = api.imageUrl(s.item);
      photo.hidden = false;
    } else {
      photo.hidden = true;
    }
    const p = s.item?.model_score;
    score.textContent =
      s.showScore && p !== undefined ? `p(like) = ${p.toFixed(3)}` : "";
    strategyToggle.checked = s.strategy === "uncertainty";
    strategyToggle.disabled = !s.uncertaintyAvailable;
    strategyNote.textContent = s.uncertaintyAvailable
      ? ""
      : "uncertainty ordering needs the service started with a model checkpoint";
  });

  consistency.onChange((s) => {
    consistencyStatus.textContent = s.message ?? consistency.progressText();
    if (s.state?.current) {
      consistencyPhoto.src = api.imageUrl(s.state.current);
      consistencyPhoto.hidden = false;
    } else {
      consistencyPhoto.hidden = true;
    }
    if (s.phase === "finished" && s.state) {
      const ids = s.state.disagreements ?? [];
      consistencyResult.innerHTML =
        `<p>agreement: <strong>${consistency.agreementText()}</strong>, ` +
        `label-noise estimate: <strong>${consistency.noiseText()}</strong></p>` +
        (ids.length
          ? `<p>disagreed on:</p><ul>${ids
              .map((i) => `<li>${i}</li>`)
              .join("")}</ul>`
          : "<p>no disagreements</p>");
    } else {
      consistencyResult.innerHTML = "";
    }
  });

  document.addEventListener("keydown", (ev) => {
    if (ev.repeat) return; // controller also guards, but skip the noise
    if (view === "labeling") void labeling.handleKey(ev.key);
    else void consistency.handleKey(ev.key);
  });

  photo.addEventListener("click", (ev) => {
    const rightHalf = ev.offsetX > photo.clientWidth / 2;
    void labeling.choose(rightHalf ? 1 : 0);
  });
  el<HTMLButtonElement>("dislike").onclick = () => void labeling.choose(0);
  el<HTMLButtonElement>("like").onclick = () => void labeling.choose(1);
  retryBtn.onclick = () => void labeling.retry();
  strategyToggle.onchange = () =>
    void labeling.setStrategy(strategyToggle.checked ? "uncertainty" : "sequential");
  showScoreToggle.onchange = () => labeling.setShowScore(showScoreToggle.checked);

  el<HTMLButtonElement>("consistency-start").onclick = () => {
    const n = parseInt(el<HTMLInputElement>("consistency-n").value, 10) || 10;
    void consistency.begin(n);
  };
  el<HTMLButtonElement>("consistency-left").onclick = () =>
    void consistency.answer(0);
  el<HTMLButtonElement>("consistency-right").onclick = () =>
    void consistency.answer(1);

  el<HTMLButtonElement>("tab-labeling").onclick = () => {
    view = "labeling";
    labelingView.hidden = false;
    consistencyView.hidden = true;
  };
  el<HTMLButtonElement>("tab-consistency").onclick = () => {
    view = "consistency";
    labelingView.hidden = true;
    consistencyView.hidden = false;
    // resume a session from a previous page load if one is running
    void consistency.resume();
  };

  void labeling.start();
}

mount();
