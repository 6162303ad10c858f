import { GameClient } from "./api";
import { GameView } from "./ui";

function boot(): void {
  const client = new GameClient("");
  const root = document.getElementById("game");
  if (!root) throw new Error("missing #game mount point");
  const view = new GameView(client, root);

  const form = document.getElementById("new-game") as HTMLFormElement;
  form.addEventListener("submit", (ev) => {
    ev.preventDefault();
    const variant = (document.getElementById("variant") as HTMLSelectElement).value;
    const formula = (document.getElementById("formula") as HTMLInputElement).value;
    void view.create(variant, formula).catch((err) => {
      const box = document.getElementById("boot-error");
      if (box) box.textContent = String(err);
    });
  });

  root.addEventListener("click", (ev) => {
    const target = ev.target as HTMLElement;
    if (target.id === "export") {
      const blob = view.exportHistory();
      const pre = document.getElementById("export-target");
      if (pre) pre.textContent = blob;
    }
  });
}

document.addEventListener("DOMContentLoaded", boot);
